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

#include <algorithm>
#include <random>
#include <string>

#include "riskagent/retrieval/index.hpp"

namespace {

using riskagent::retrieval::VectorIndex;

VectorIndex random_index(std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(7);
  std::normal_distribution<float> dist;
  VectorIndex idx(dim);
  std::vector<float> row(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : row) x = dist(rng);
    std::string id = std::to_string(i);
    idx.add("c" + std::string(6 - std::min<std::size_t>(6, id.size()), '0') + id, row);
  }
  return idx;
}

void BM_IndexSearch(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  auto dim = static_cast<std::size_t>(state.range(1));
  auto k = static_cast<std::size_t>(state.range(2));
  auto idx = random_index(n, dim);
  std::vector<float> q(dim, 0.25f);
  for (auto _ : state) benchmark::DoNotOptimize(idx.search(q, k));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_IndexSearch)->Args({1000, 64, 10})->Args({2164, 256, 10})->Args({20000, 256, 10})->Args({20000, 256, 1000});

void BM_IndexRoundTrip(benchmark::State& state) {
  auto idx = random_index(static_cast<std::size_t>(state.range(0)), 256);
  for (auto _ : state) {
    auto bytes = idx.serialize();
    benchmark::DoNotOptimize(VectorIndex::deserialize(bytes));
  }
}
BENCHMARK(BM_IndexRoundTrip)->Arg(2164);

}  // namespace
