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

#include "riskagent/lang/bands.hpp"

#include <algorithm>
#include <stdexcept>

#include "riskagent/util/strings.hpp"

namespace riskagent::lang {

std::string_view to_string(Bounds b) {
  switch (b) {
    case Bounds::closed_open: return "[)";
    case Bounds::closed: return "[]";
    case Bounds::open: return "()";
    case Bounds::open_closed: return "(]";
  }
  return "[)";
}

Bounds bounds_from_string(std::string_view s) {
  if (s == "[)") return Bounds::closed_open;
  if (s == "[]") return Bounds::closed;
  if (s == "()") return Bounds::open;
  if (s == "(]") return Bounds::open_closed;
  throw std::invalid_argument("unknown bounds kind '" + std::string(s) + "'");
}

bool InterpretationBand::lower_inclusive() const noexcept {
  return bounds == Bounds::closed_open || bounds == Bounds::closed;
}

bool InterpretationBand::upper_inclusive() const noexcept {
  return bounds == Bounds::closed || bounds == Bounds::open_closed;
}

bool InterpretationBand::contains(double v) const noexcept {
  bool above = lower_inclusive() ? v >= lower : v > lower;
  bool below = upper_inclusive() ? v <= upper : v < upper;
  return above && below;
}

bool InterpretationBand::intersects(double lo, double hi) const noexcept {
  if (lo > hi) return false;
  if (lo == hi) return contains(lo);
  // [lo, hi] is non-degenerate here.
  bool starts_before_end = upper_inclusive() ? lo <= upper : lo < upper;
  bool ends_after_start = lower_inclusive() ? hi >= lower : hi > lower;
  if (!(starts_before_end && ends_after_start)) return false;
  // A band that is itself a single excluded point, e.g. (2, 2], is empty.
  return lower < upper || (lower == upper && lower_inclusive() && upper_inclusive());
}

std::vector<InterpretationBand> bands_for(std::span<const InterpretationBand> bands,
                                          std::string_view output) {
  std::vector<InterpretationBand> out;
  for (const auto& b : bands)
    if (b.output == output) out.push_back(b);
  return out;
}

std::vector<InterpretationBand> band_lookup(std::span<const InterpretationBand> bands, double value) {
  for (const auto& b : bands)
    if (b.contains(value)) return {b};
  return {};
}

std::vector<InterpretationBand> band_lookup(std::span<const InterpretationBand> bands, double lo,
                                            double hi) {
  if (lo == hi) return band_lookup(bands, lo);
  std::vector<InterpretationBand> out;
  for (const auto& b : bands)
    if (b.intersects(lo, hi)) out.push_back(b);
  return out;
}

bool bands_overlap(const InterpretationBand& a, const InterpretationBand& b) noexcept {
  double lo = std::max(a.lower, b.lower);
  double hi = std::min(a.upper, b.upper);
  if (lo < hi) return true;
  if (lo > hi) return false;
  return a.contains(lo) && b.contains(lo);
}

std::string coverage_gap(std::span<const InterpretationBand> bands, double lo, double hi) {
  std::vector<InterpretationBand> sorted(bands.begin(), bands.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.lower != b.lower) return a.lower < b.lower;
    return a.lower_inclusive() && !b.lower_inclusive();
  });
  // Sweep: everything strictly below `reach` is covered, and `reach` itself
  // is covered when reach_inclusive holds.
  double reach = lo;
  bool reach_inclusive = false;
  for (const auto& b : sorted) {
    if (reach > hi || (reach == hi && reach_inclusive)) break;
    if (b.upper < reach || (b.upper == reach && !b.upper_inclusive())) continue;
    bool fills_point = b.lower < reach || (b.lower == reach && b.lower_inclusive());
    if (b.lower > reach) return "no band covers values between " + util::format_double(reach) + " and " + util::format_double(b.lower);
    if (b.lower == reach && !reach_inclusive && !fills_point) return "no band covers " + util::format_double(reach);
    if (b.upper > reach) {
      reach = b.upper;
      reach_inclusive = b.upper_inclusive();
    } else {
      reach_inclusive = reach_inclusive || b.upper_inclusive();
    }
  }
  if (reach < hi) return "no band covers values between " + util::format_double(reach) + " and " + util::format_double(hi);
  if (reach == hi && !reach_inclusive) return "no band covers " + util::format_double(reach);
  return {};
}

}  // namespace riskagent::lang
