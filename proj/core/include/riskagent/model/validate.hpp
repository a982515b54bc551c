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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "riskagent/model/calculator.hpp"

namespace riskagent::model {

struct CheckResult {
  std::string name;  // metadata | parse | typecheck | band_overlap | band_coverage
  bool passed = false;
  std::string detail;
};

/// Mechanical half of the verification gate. Passing every check is
/// necessary, not sufficient, for a calculator to be verified.
struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  const CheckResult* find(std::string_view name) const;
  std::vector<std::string> failures() const;
  nlohmann::json to_json() const;
};

ValidationReport validate(const Calculator& calc);

/// Compact card shown to the selection model.
struct ToolDigest {
  std::string id;
  std::string text;
  std::vector<std::string> parameters;
};

ToolDigest digest(const Calculator& calc);

}  // namespace riskagent::model
