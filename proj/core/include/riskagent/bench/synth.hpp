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
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "riskagent/bench/dataset.hpp"
#include "riskagent/lang/ast.hpp"
#include "riskagent/lang/binding.hpp"
#include "riskagent/llm/gateway.hpp"
#include "riskagent/llm/templates.hpp"
#include "riskagent/model/registry.hpp"

namespace riskagent::bench {

struct SynthOptions {
  std::size_t per_calculator = 1;
  std::uint64_t seed = 0;
};

struct SynthResult {
  std::vector<RiskQAItem> items;
  std::vector<std::string> warnings;
};

/// Exact in-domain values for every parameter. Unbounded numbers are drawn
/// from [0, 100].
lang::Binding sample_binding(const lang::Program& program, std::mt19937_64& rng);

/// Writes vignettes for random parameter sets of each verified calculator
/// whose first output has two to ten interpretation labels. Replies that do
/// not parse, or whose keyed option does not name the computed label, are
/// dropped with a warning.
SynthResult synthesize(const model::Registry& registry, llm::Gateway& gateway, const llm::TemplateSet& templates,
                       const SynthOptions& options);

}  // namespace riskagent::bench
