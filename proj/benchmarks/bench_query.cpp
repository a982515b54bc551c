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

#include <benchmark/benchmark.h>

#include <random>

#include "riskagent/curation/query.hpp"

namespace {

std::string random_abstract(std::mt19937_64& rng) {
  static const char* words[] = {"patient", "patients", "risk", "mortality", "score", "points", "rule", "cohort",
                                "trial", "outcome", "model", "calculator", "analysis", "year", "hospital", "adults"};
  std::uniform_int_distribution<std::size_t> pick(0, std::size(words) - 1);
  std::string s;
  for (int i = 0; i < 250; ++i) {
    s += words[pick(rng)];
    s += ' ';
  }
  return s;
}

void BM_BooleanFilter(benchmark::State& state) {
  auto q = riskagent::curation::BooleanQuery::default_screen();
  std::mt19937_64 rng(3);
  std::vector<std::string> docs;
  for (int i = 0; i < 256; ++i) docs.push_back(random_abstract(rng));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(q.matches(docs[i++ % docs.size()]));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BooleanFilter);

}  // namespace

BENCHMARK_MAIN();
