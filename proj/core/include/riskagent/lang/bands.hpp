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

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace riskagent::lang {

/// Endpoint inclusivity of an interpretation band. Half-open [lower, upper)
/// unless overridden.
enum class Bounds { closed_open, closed, open, open_closed };

std::string_view to_string(Bounds b);           // "[)", "[]", "()", "(]"
Bounds bounds_from_string(std::string_view s);  // throws std::invalid_argument

struct InterpretationBand {
  std::string output;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  Bounds bounds = Bounds::closed_open;
  std::string label;
  std::string statement;

  bool lower_inclusive() const noexcept;
  bool upper_inclusive() const noexcept;
  bool contains(double v) const noexcept;
  /// Intersects the closed interval [lo, hi].
  bool intersects(double lo, double hi) const noexcept;

  bool operator==(const InterpretationBand&) const = default;
};

/// Bands that apply to one output, in their original order.
std::vector<InterpretationBand> bands_for(std::span<const InterpretationBand> bands,
                                          std::string_view output);

/// Exact value: the first (and, for well-formed bands, only) containing
/// band, or nothing. Interval: every band intersecting [lo, hi], in order.
std::vector<InterpretationBand> band_lookup(std::span<const InterpretationBand> bands, double value);
std::vector<InterpretationBand> band_lookup(std::span<const InterpretationBand> bands, double lo,
                                            double hi);

/// True when no two bands share a point.
bool bands_overlap(const InterpretationBand& a, const InterpretationBand& b) noexcept;

/// Describes the first uncovered point of [lo, hi] or returns an empty
/// string when the union of bands covers it.
std::string coverage_gap(std::span<const InterpretationBand> bands, double lo, double hi);

}  // namespace riskagent::lang
