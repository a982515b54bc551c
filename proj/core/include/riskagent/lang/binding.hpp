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

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "riskagent/lang/ast.hpp"

namespace riskagent::lang {

/// An exact runtime value.
using Value = std::variant<bool, double, std::string>;

std::string render_value(const Value& v);

/// One parameter's assignment. Anything other than `exact` triggers range
/// estimation.
struct BindingEntry {
  enum class Kind { exact, interval, label_set, unknown };

  Kind kind = Kind::unknown;
  Value value = false;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::string> labels;
  std::optional<std::string> unit;

  static BindingEntry exact_bool(bool b);
  static BindingEntry exact_number(double x, std::optional<std::string> unit = std::nullopt);
  static BindingEntry exact_label(std::string label);
  static BindingEntry interval(double lo, double hi, std::optional<std::string> unit = std::nullopt);
  static BindingEntry one_of(std::vector<std::string> labels);
  static BindingEntry unknown();

  bool is_exact() const noexcept { return kind == Kind::exact; }
  std::string render() const;
  bool operator==(const BindingEntry&) const = default;
};

using Binding = std::map<std::string, BindingEntry, std::less<>>;

bool all_exact(const Binding& b);

/// JSON form used by `calc eval --params`: true/false, numbers, label
/// strings, "UNKNOWN", [lo, hi] numeric pairs, arrays of labels, or
/// {"value": x, "unit": "..."} objects.
Binding binding_from_json(const nlohmann::json& j);
nlohmann::json binding_to_json(const Binding& b);

}  // namespace riskagent::lang
