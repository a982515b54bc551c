// Copyright 2026 The riskagent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "riskagent/llm/gateway.hpp"
#include "riskagent/llm/templates.hpp"

namespace riskagent::llm {

template <class T>
struct RepairOutcome {
  std::optional<T> value;
  std::vector<std::string> replies;
  std::string error;  // last parse error
  bool repaired = false;
};

/// Sends `first`; when the reply does not parse, continues the conversation
/// once with the `repair` prompt and parses again.
template <class T>
RepairOutcome<T> ask_with_repair(Gateway& gateway, const ChatRequest& first, const PromptTemplate& repair,
                                 const std::function<std::optional<T>(const std::string&, std::string&)>& parse,
                                 const std::function<Bindings(const std::string&)>& repair_bindings = {}) {
  RepairOutcome<T> out;
  auto reply = gateway.chat(first).content;
  out.replies.push_back(reply);
  out.value = parse(reply, out.error);
  if (out.value) return out;

  ChatRequest again = first;
  again.messages.push_back({Role::assistant, reply});
  again.messages.push_back({Role::user, repair.render(repair_bindings ? repair_bindings(out.error) : Bindings{})});
  again.purpose = repair.role_id;
  auto second = gateway.chat(again).content;
  out.replies.push_back(second);
  out.repaired = true;
  out.error.clear();
  out.value = parse(second, out.error);
  return out;
}

}  // namespace riskagent::llm
