// Copyright 2026 The sadet Authors
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

#include <vector>

#include "sadet/eval.hpp"
#include "sadet/hash.hpp"
#include "sadet/perturb.hpp"

namespace {

std::vector<sadet::ScoredExample> examples(std::size_t n) {
  sadet::Rng rng(3);
  std::vector<sadet::ScoredExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = rng.uniform01() < 0.3;
    out.push_back({std::to_string(i), rng.uniform01() + (pos ? 0.2 : 0.0), pos});
  }
  return out;
}

void BM_Auc(benchmark::State& state) {
  const auto ex = examples(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sadet::auc(ex));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Auc)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

void BM_RocCurve(benchmark::State& state) {
  const auto ex = examples(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sadet::roc_curve(ex));
}
BENCHMARK(BM_RocCurve)->Arg(1000)->Arg(100000);

void BM_InjectTypos(benchmark::State& state) {
  const std::string text =
      "The blender works well and the motor is quiet. Cleaning the jar takes a minute. "
      "I use it every morning for smoothies and it has not failed once.";
  sadet::Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(sadet::inject_typos(text, static_cast<std::size_t>(state.range(0)), rng));
}
BENCHMARK(BM_InjectTypos)->DenseRange(1, 5);

}  // namespace
