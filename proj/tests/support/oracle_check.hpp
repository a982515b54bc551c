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

// Cross-checks the library evaluators against the reference evaluator in
// program_gen.hpp over randomly generated programs.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "program_gen.hpp"
#include "riskagent/lang/evaluator.hpp"
#include "riskagent/lang/parser.hpp"

namespace riskagent::testing {

struct OracleStats {
  int programs = 0;
  long completions = 0;
  long valid_completions = 0;
  int violations = 0;
  std::vector<std::string> failures;  // first few, for diagnostics

  void fail(const GenProgram& p, const std::string& what) {
    ++violations;
    if (failures.size() < 5) failures.push_back(what + "\n" + p.source());
  }
};

struct GeneratedCase {
  GenProgram program;
  lang::Binding binding;
  std::vector<std::vector<RefValue>> cands;  // per param, values to enumerate
  int unknowns = 0;
};

/// Binds every parameter: up to max_unknowns are left open (UNKNOWN, a
/// sub-interval or a label subset), the rest receive a random exact value.
inline GeneratedCase make_case(ProgramGenerator& gen, bool discrete_only, int max_unknowns, int samples) {
  GeneratedCase c;
  c.program = gen.generate(discrete_only);
  auto& rng = gen.rng();
  const auto& params = c.program.params;
  std::vector<int> order(params.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::shuffle(order.begin(), order.end(), rng);
  // Open the continuous parameter first when there is one.
  std::stable_partition(order.begin(), order.end(),
                        [&](int i) { return params[i].kind == GenParam::Kind::number_range; });
  int open = std::uniform_int_distribution<int>(std::min(1, max_unknowns),
                                                std::min<int>(max_unknowns, static_cast<int>(params.size())))(rng);
  std::vector<bool> is_open(params.size(), false);
  for (int i = 0; i < open; ++i) is_open[order[i]] = true;
  c.unknowns = open;

  int continuous = 0;
  for (std::size_t i = 0; i < params.size(); ++i)
    if (is_open[i] && params[i].kind == GenParam::Kind::number_range) ++continuous;
  int grid = continuous == 0 ? 2 : std::max(2, static_cast<int>(std::ceil(std::pow(samples, 1.0 / continuous))));

  c.cands.resize(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& p = params[i];
    if (!is_open[i]) {
      auto all = candidates(p, 7);
      const auto& v = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
      c.cands[i] = {v};
      c.binding[p.name] = to_entry(v);
      continue;
    }
    bool narrow = std::bernoulli_distribution(0.4)(rng);
    switch (p.kind) {
      case GenParam::Kind::boolean:
        c.cands[i] = candidates(p, grid);
        c.binding[p.name] = lang::BindingEntry::unknown();
        break;
      case GenParam::Kind::enumeration: {
        if (narrow && p.labels.size() > 2) {
          std::vector<std::string> subset(p.labels.begin(), p.labels.begin() + 2);
          c.binding[p.name] = lang::BindingEntry::one_of(subset);
          for (const auto& l : subset) c.cands[i].emplace_back(l);
        } else {
          c.binding[p.name] = lang::BindingEntry::unknown();
          c.cands[i] = candidates(p, grid);
        }
        break;
      }
      case GenParam::Kind::number_set: {
        if (narrow && p.values.size() > 2) {
          double lo = p.values[1];
          double hi = p.values.back();
          c.binding[p.name] = lang::BindingEntry::interval(lo, hi);
          for (double v : p.values)
            if (v >= lo && v <= hi) c.cands[i].emplace_back(v);
        } else {
          c.binding[p.name] = lang::BindingEntry::unknown();
          c.cands[i] = candidates(p, grid);
        }
        break;
      }
      case GenParam::Kind::number_range: {
        GenParam q = p;
        if (narrow) {
          double a = std::uniform_real_distribution<double>(p.lo, p.hi)(rng);
          double b = std::uniform_real_distribution<double>(p.lo, p.hi)(rng);
          q.lo = std::min(a, b);
          q.hi = std::max(a, b);
          c.binding[p.name] = lang::BindingEntry::interval(q.lo, q.hi);
        } else {
          c.binding[p.name] = lang::BindingEntry::unknown();
        }
        c.cands[i] = candidates(q, grid);
        break;
      }
    }
  }
  return c;
}

/// exact: bounds must equal min/max over the enumeration (all-discrete case);
/// otherwise only containment is required.
inline void check_case(const GeneratedCase& c, bool exact, OracleStats& stats) {
  ++stats.programs;
  const auto& prog = c.program;
  lang::Program parsed;
  try {
    parsed = lang::parse(prog.source());
  } catch (const std::exception& e) {
    stats.fail(prog, std::string("parse: ") + e.what());
    return;
  }
  if (auto d = lang::typecheck(parsed); !d.empty()) {
    stats.fail(prog, "typecheck: " + lang::format_diagnostics(d));
    return;
  }

  std::size_t nout = prog.outputs.size();
  std::vector<double> mins(nout, INFINITY), maxs(nout, -INFINITY);
  bool any_valid = false;
  for_each_completion(c.cands, [&](const Assignment& a) {
    ++stats.completions;
    auto ref = prog.evaluate(a);
    std::optional<lang::EvalOutcome> got;
    try {
      got = lang::eval_point(parsed, to_binding(prog, a));
    } catch (const lang::EvalError&) {
    }
    if (ref.has_value() != got.has_value()) {
      stats.fail(prog, "eval_point disagrees with the reference on success");
      return;
    }
    if (!ref) return;
    ++stats.valid_completions;
    any_valid = true;
    for (std::size_t i = 0; i < nout; ++i) {
      if (got->outputs[i].lo != (*ref)[i]) stats.fail(prog, "eval_point value differs from the reference");
      mins[i] = std::min(mins[i], (*ref)[i]);
      maxs[i] = std::max(maxs[i], (*ref)[i]);
    }
  });

  lang::EvalOutcome range;
  try {
    range = lang::eval_interval(parsed, c.binding);
  } catch (const lang::EvalError& e) {
    if (any_valid) stats.fail(prog, std::string("eval_interval failed although a completion succeeds: ") + e.what());
    return;
  }
  if (!any_valid) {
    if (exact) stats.fail(prog, "eval_interval succeeded although every completion fails");
    return;
  }
  for (std::size_t i = 0; i < nout; ++i) {
    const auto& o = range.outputs[i];
    if (exact) {
      if (o.lo != mins[i] || o.hi != maxs[i])
        stats.fail(prog, "bounds [" + std::to_string(o.lo) + ", " + std::to_string(o.hi) + "] differ from enumeration [" +
                             std::to_string(mins[i]) + ", " + std::to_string(maxs[i]) + "]");
    } else if (!(o.lo <= mins[i] && maxs[i] <= o.hi)) {
      stats.fail(prog, "interval [" + std::to_string(o.lo) + ", " + std::to_string(o.hi) + "] misses sampled [" +
                           std::to_string(mins[i]) + ", " + std::to_string(maxs[i]) + "]");
    }
  }
}

inline OracleStats run_discrete(std::uint64_t seed, int programs) {
  ProgramGenerator gen(seed);
  OracleStats stats;
  for (int i = 0; i < programs; ++i) check_case(make_case(gen, true, 3, 1), true, stats);
  return stats;
}

inline OracleStats run_continuous(std::uint64_t seed, int programs, int samples = 1000) {
  ProgramGenerator gen(seed);
  OracleStats stats;
  for (int i = 0; i < programs; ++i) check_case(make_case(gen, false, 3, samples), false, stats);
  return stats;
}

/// With nothing left open eval_interval must agree with eval_point.
inline OracleStats run_zero_unknowns(std::uint64_t seed, int programs) {
  ProgramGenerator gen(seed);
  OracleStats stats;
  for (int i = 0; i < programs; ++i) {
    auto c = make_case(gen, false, 0, 1);
    ++stats.programs;
    auto parsed = lang::parse(c.program.source());
    std::optional<lang::EvalOutcome> point, range;
    try {
      point = lang::eval_point(parsed, c.binding);
    } catch (const lang::EvalError&) {
    }
    try {
      range = lang::eval_interval(parsed, c.binding);
    } catch (const lang::EvalError&) {
    }
    ++stats.completions;
    if (point) ++stats.valid_completions;
    if (point.has_value() != range.has_value()) {
      stats.fail(c.program, "success differs between evaluators");
      continue;
    }
    if (!point) continue;
    range->ranged = false;
    if (!(point->outputs == range->outputs)) stats.fail(c.program, "outputs differ between evaluators");
  }
  return stats;
}

}  // namespace riskagent::testing
