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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "riskagent/bench/harness.hpp"

namespace riskagent::bench {

/// "41.9%"; "n/a" when the denominator is zero.
std::string percent(std::size_t part, std::size_t whole);

/// Selection correctness crossed with answer correctness.
struct ConfusionMatrix {
  std::size_t sel_right_ans_right = 0;
  std::size_t sel_right_ans_wrong = 0;
  std::size_t sel_wrong_ans_right = 0;
  std::size_t sel_wrong_ans_wrong = 0;

  void add(bool selection_right, bool answer_right);
  std::size_t total() const noexcept;
  std::size_t selection_right() const noexcept { return sel_right_ans_right + sel_right_ans_wrong; }
  std::size_t selection_wrong() const noexcept { return sel_wrong_ans_right + sel_wrong_ans_wrong; }
  std::size_t answer_right() const noexcept { return sel_right_ans_right + sel_wrong_ans_right; }
  std::size_t answer_wrong() const noexcept { return sel_right_ans_wrong + sel_wrong_ans_wrong; }
  /// Percentages are of the selection row.
  std::string render() const;
  nlohmann::json to_json() const;
  bool operator==(const ConfusionMatrix&) const = default;
};

struct MethodStats {
  Method method = Method::agent;
  Setting setting = Setting::riskqa;
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t abstained = 0;
  std::size_t failed = 0;

  double accuracy() const noexcept { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

struct BenchReport {
  std::size_t items = 0;
  std::vector<MethodStats> methods;
  std::optional<double> selection_accuracy;  // agent under riskqa
  std::optional<double> retrieval_accuracy;  // top-1 hit under riskqa
  std::optional<ConfusionMatrix> confusion;  // agent under riskqa
  std::size_t abstentions = 0;

  const MethodStats* find(Method m, Setting s) const;
  nlohmann::json to_json() const;
  /// method,setting,total,correct,abstained,failed,accuracy
  std::string to_csv() const;
  std::string render() const;
};

/// Abstentions and failures count as incorrect. Throws std::invalid_argument
/// for an empty dataset, runs naming unknown items, or more than one run per
/// item, method and setting.
BenchReport score(const std::vector<MethodRun>& runs, const std::vector<RiskQAItem>& items);

}  // namespace riskagent::bench
