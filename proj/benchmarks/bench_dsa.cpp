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

#include "sadet/hash.hpp"
#include "sadet/sa.hpp"

namespace {

struct Store {
  sadet::ReferenceStore ref;
  std::vector<sadet::ActivationTrace> queries;
  std::vector<sadet::ClassLabel> labels;
};

Store make_store(std::size_t n, std::size_t dim, std::size_t queries) {
  sadet::Rng rng(1);
  std::vector<sadet::LabeledTrace> training;
  training.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    const auto c = static_cast<std::uint32_t>(i % 2);
    for (double& x : v) x = rng.uniform(0, 1) + (c ? 0.3 : 0.0);
    training.push_back({{std::move(v), "hidden", ""}, {c, c ? "positive" : "negative"}});
  }
  Store s{sadet::ReferenceStore::build(training), {}, {}};
  for (std::size_t i = 0; i < queries; ++i) {
    std::vector<double> v(dim);
    for (double& x : v) x = rng.uniform(0, 1.3);
    s.queries.push_back({std::move(v), "hidden", "q" + std::to_string(i)});
    s.labels.push_back({static_cast<std::uint32_t>(i % 2), i % 2 ? "positive" : "negative"});
  }
  return s;
}

void BM_DsaSingle(benchmark::State& state) {
  const auto variant = static_cast<sadet::DsaVariant>(state.range(0));
  const auto s = make_store(static_cast<std::size_t>(state.range(1)), 64, 64);
  const sadet::DsaConfig cfg{variant, 10, sadet::OtherClassMode::pooled};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sadet::score(s.queries[i % 64], s.labels[i % 64], s.ref, cfg));
    ++i;
  }
  state.SetLabel(std::string(sadet::to_string(variant)));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DsaSingle)->ArgsProduct({{0, 1, 2, 3}, {2000, 20000}});

void BM_DsaBatch(benchmark::State& state) {
  const auto s = make_store(2000, 64, 1000);
  const sadet::DsaConfig cfg{sadet::DsaVariant::dsa3, 10, sadet::OtherClassMode::pooled};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sadet::score_batch(s.queries, s.labels, s.ref, cfg, static_cast<std::size_t>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_DsaBatch)->Arg(1)->Arg(4)->UseRealTime();

void BM_StoreBuild(benchmark::State& state) {
  sadet::Rng rng(2);
  std::vector<sadet::LabeledTrace> training;
  for (int i = 0; i < state.range(0); ++i) {
    std::vector<double> v(64);
    for (double& x : v) x = rng.uniform01();
    training.push_back({{std::move(v), "hidden", ""}, {static_cast<std::uint32_t>(i % 2), i % 2 ? "b" : "a"}});
  }
  for (auto _ : state) benchmark::DoNotOptimize(sadet::ReferenceStore::build(training));
}
BENCHMARK(BM_StoreBuild)->Arg(2000)->Arg(20000);

}  // namespace
