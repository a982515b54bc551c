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

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "riskagent/llm/chat.hpp"

namespace riskagent::llm {

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Bindings = std::map<std::string, std::string, std::less<>>;

/// Every model role in the system. Variants such as "draft.repair" share
/// the role before the dot.
const std::vector<std::string>& template_roles();

/// A prompt with named `{placeholder}` slots; `{{` and `}}` are literal
/// braces. Files start with header lines
///
///   # placeholders: a, b
///   # model: strong|fast
///   # system: optional system message
///   ---
///
/// followed by the body.
struct PromptTemplate {
  std::string role_id;
  std::string body;
  std::set<std::string> placeholders;
  std::string model_tag = "strong";
  std::string system;

  static PromptTemplate parse(std::string role_id, std::string_view file_text);
  std::string render(const Bindings& bindings) const;
  /// A one-message request (plus the system message, if any).
  ChatRequest request(const Bindings& bindings) const;
};

class TemplateSet {
 public:
  /// The templates compiled into the library.
  static TemplateSet builtin();
  /// Builtins overridden by any `<role>.tmpl` files in `dir`.
  static TemplateSet with_overrides(const std::filesystem::path& dir);

  const PromptTemplate& get(std::string_view role_id) const;
  bool has(std::string_view role_id) const;
  std::vector<std::string> roles() const;

  void add(PromptTemplate t);

 private:
  std::map<std::string, PromptTemplate, std::less<>> templates_;
};

}  // namespace riskagent::llm
