// Copyright 2026 The Homophily Authors
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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "benchmark/benchmark.h"
#include "homophily/estimators.h"
#include "homophily/glm.h"
#include "homophily/graph.h"
#include "homophily/numeric.h"
#include "homophily/rng.h"
#include "homophily/runner.h"
#include "homophily/sampling.h"
#include "homophily/simgen.h"

namespace homophily {
namespace {

void BM_GeneratePreferentialAttachment(benchmark::State& state) {
  PreferentialAttachmentParams params;
  params.node_count = static_cast<int32_t>(state.range(0));
  uint64_t seed = 1;
  for (auto _ : state) {
    Rng rng(seed++);
    auto g = GeneratePreferentialAttachment(params, rng);
    benchmark::DoNotOptimize(g);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GeneratePreferentialAttachment)->Arg(1000)->Arg(4000)->Arg(16000);

void BM_FitLogistic(benchmark::State& state) {
  const int rows = static_cast<int>(state.range(0));
  Rng rng(7);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  DesignMatrix x({"intercept", "x1", "x2", "x3"});
  std::vector<uint8_t> y;
  for (int r = 0; r < rows; ++r) {
    const double a = normal(rng), b = normal(rng), c = normal(rng);
    const double row[] = {1.0, a, b, c};
    x.AddRow(row);
    y.push_back(unit(rng) < Logistic(0.3 + a - 0.5 * b + 0.2 * c));
  }
  for (auto _ : state) {
    auto fit = FitLogistic(x, y);
    benchmark::DoNotOptimize(fit);
  }
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_FitLogistic)->Arg(1000)->Arg(10000)->Arg(40000);

void BM_FitStrategy(benchmark::State& state) {
  const auto kind = static_cast<ModelKind>(state.range(0));
  Rng rng(11);
  Graph g = *GeneratePreferentialAttachment({}, rng);
  NodeTable nodes = *GenerateFeatures(g, Dgp::kMain, {}, rng);
  GenerateOutcomes(nodes, Dgp::kMain, {}, rng);
  GroundTruthMask mask = *RandomEdgeSample(g, 0.025, rng);
  EstimationInput input;
  input.graph = &g;
  input.nodes = &nodes;
  input.mask = &mask;
  DyadFrame frame = *BuildDyadFrame(input);
  for (auto _ : state) {
    auto fit = FitStrategy(kind, input, frame);
    benchmark::DoNotOptimize(fit);
  }
  state.SetLabel(std::string(ModelKindName(kind)));
}
BENCHMARK(BM_FitStrategy)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

void BM_RunReplication(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.n_nodes = static_cast<int32_t>(state.range(0));
  int rep = 0;
  for (auto _ : state) {
    auto records = RunReplication(cfg, rep++);
    benchmark::DoNotOptimize(records);
  }
}
BENCHMARK(BM_RunReplication)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace homophily

BENCHMARK_MAIN();
