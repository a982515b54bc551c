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

#include "riskagent/lang/evaluator.hpp"
#include "riskagent/lang/parser.hpp"
#include "riskagent/util/jsonl.hpp"

namespace {

using namespace riskagent::lang;

Program fixture_program(const char* name) {
  return parse(riskagent::util::read_file(std::string(RISKAGENT_FIXTURE_DIR) + "/" + name));
}

const char* kFlags[] = {"age_over_65", "hypertension", "diabetes", "prior_stroke", "heart_failure"};

// F1 with the first `state.range(0)` flags unknown.
void BM_EvalIntervalDiscrete(benchmark::State& state) {
  auto program = fixture_program("f1.calc");
  Binding b;
  for (int i = 0; i < 5; ++i)
    b[kFlags[i]] = i < state.range(0) ? BindingEntry::unknown() : BindingEntry::exact_bool(true);
  for (auto _ : state) benchmark::DoNotOptimize(eval_interval(program, b));
}
BENCHMARK(BM_EvalIntervalDiscrete)->DenseRange(0, 5);

void BM_EvalPointLogistic(benchmark::State& state) {
  auto program = fixture_program("f2.calc");
  Binding b{{"age", BindingEntry::exact_number(60)}, {"smoker", BindingEntry::exact_bool(true)}};
  for (auto _ : state) benchmark::DoNotOptimize(eval_point(program, b));
}
BENCHMARK(BM_EvalPointLogistic);

void BM_EvalIntervalContinuous(benchmark::State& state) {
  auto program = fixture_program("f2.calc");
  Binding b{{"age", BindingEntry::interval(40, 80)}, {"smoker", BindingEntry::unknown()}};
  for (auto _ : state) benchmark::DoNotOptimize(eval_interval(program, b));
}
BENCHMARK(BM_EvalIntervalContinuous);

void BM_ParseTypecheck(benchmark::State& state) {
  auto source = riskagent::util::read_file(std::string(RISKAGENT_FIXTURE_DIR) + "/f1.calc");
  for (auto _ : state) benchmark::DoNotOptimize(typecheck(parse(source)));
}
BENCHMARK(BM_ParseTypecheck);

}  // namespace
