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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "riskagent/agent/agent.hpp"
#include "riskagent/bench/dataset.hpp"

namespace riskagent::bench {

enum class Method { agent, cot, rag, name };
enum class Setting { riskqa, riskqa_star };

std::string_view to_string(Method m);
std::string_view to_string(Setting s);
Method method_from_string(std::string_view s);
/// Accepts "riskqa-star" as well as "riskqa_star".
Setting setting_from_string(std::string_view s);

/// rag and name read the oracle calculator, so they need riskqa_star.
/// Throws std::invalid_argument for other combinations.
void check_combination(Method m, Setting s);

struct MethodRun {
  std::string item_id;
  Method method = Method::agent;
  Setting setting = Setting::riskqa;
  std::optional<std::string> predicted;  // absent = abstained
  std::optional<std::string> selected_calculator;
  std::optional<std::string> retrieval_top1;
  bool fallback = false;
  bool failed = false;
  std::string error;
  std::string final_reply;
  /// Method-specific audit data: the agent's selection, session status and
  /// risk summary.
  nlohmann::json detail = nlohmann::json::object();

  nlohmann::json to_json() const;
  static MethodRun from_json(const nlohmann::json& j);
};

/// Option label from "The answer is (X)", "Answer: X" or a reply that is
/// only a label. The last such mention wins.
std::optional<std::string> extract_answer(std::string_view reply, const std::vector<std::string>& labels);

MethodRun run_method(const RiskQAItem& item, Method method, Setting setting, const agent::AgentContext& ctx);

/// Items run concurrently up to the gateway limit; results keep item order.
std::vector<MethodRun> run_benchmark(const std::vector<RiskQAItem>& items, Method method, Setting setting,
                                     const agent::AgentContext& ctx);

}  // namespace riskagent::bench
