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
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "riskagent/lang/ast.hpp"
#include "riskagent/lang/bands.hpp"
#include "riskagent/lang/binding.hpp"

namespace riskagent::lang {

/// Unknowns with at most this many candidate values are enumerated exactly.
inline constexpr std::size_t kEnumerationCutoff = 16;
/// Upper bound on the cross product of enumerated unknowns. Beyond it the
/// widest unknowns fall back to abstract propagation.
inline constexpr std::size_t kMaxCombinations = 65536;

struct OutputResult {
  std::string name;
  ValueType type = ValueType::number;
  // Booleans are encoded as 0/1. Point results have lo == hi.
  double lo = 0.0;
  double hi = 0.0;
  bool partial = false;
  std::string partial_reason;
  std::vector<InterpretationBand> bands;

  bool is_point() const noexcept { return lo == hi; }
  std::string render() const;
  bool operator==(const OutputResult&) const = default;
};

struct EvalOutcome {
  std::vector<OutputResult> outputs;
  bool ranged = false;                  // produced by range estimation
  std::vector<std::string> missing;     // params not bound exactly

  const OutputResult* find(std::string_view name) const;
  /// Multi-line text handed to the agent as an interpreter observation.
  std::string render() const;
  nlohmann::json to_json() const;
  static EvalOutcome from_json(const nlohmann::json& j);
  bool operator==(const EvalOutcome&) const = default;
};

/// Every parameter must be bound exactly and in-domain. Throws
/// BindingError before evaluation, EvalError on a domain failure.
EvalOutcome eval_point(const Program& program, const Binding& binding,
                       std::span<const InterpretationBand> bands = {});

/// Best/worst-case range estimation. Parameters missing from the binding
/// are treated as UNKNOWN. The result contains eval_point's result for
/// every exact completion of the binding. Throws BindingError for an
/// unboundable UNKNOWN, EvalError when no completion evaluates.
EvalOutcome eval_interval(const Program& program, const Binding& binding,
                          std::span<const InterpretationBand> bands = {});

/// Dispatches to eval_point when everything is exact.
EvalOutcome evaluate(const Program& program, const Binding& binding,
                     std::span<const InterpretationBand> bands = {});

}  // namespace riskagent::lang
