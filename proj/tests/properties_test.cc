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

// Invariants checked against brute-force oracles on many random inputs.

#include <cmath>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "gtest/gtest.h"
#include "homophily/estimators.h"
#include "homophily/glm.h"
#include "homophily/graph.h"
#include "homophily/metrics.h"
#include "homophily/runner.h"
#include "oracles.h"

namespace homophily {
namespace {

struct RandomCase {
  Graph graph;
  std::vector<std::pair<int, int>> edges;
  std::vector<uint8_t> y;
  std::vector<int> y_int;
};

RandomCase MakeCase(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(3, 30);
  std::uniform_real_distribution<double> density(0.05, 0.6);
  std::bernoulli_distribution coin(0.5);
  for (;;) {
    RandomCase c;
    const int n = size(rng);
    c.edges = testing::RandomEdges(n, density(rng), rng);
    std::vector<Edge> e;
    for (auto [u, v] : c.edges) e.push_back({u, v});
    c.graph = *Graph::FromEdges(n, e);
    int group = 0;
    for (int v = 0; v < n; ++v) {
      c.y.push_back(coin(rng));
      c.y_int.push_back(c.y.back());
      group += c.y.back();
    }
    if (group > 0) return c;
  }
}

TEST(EstimandPropertyTest, EgoAndDyadFormsAgreeOnRandomGraphs) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> action(0.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    RandomCase c = MakeCase(rng);
    const testing::Adjacency a =
        testing::DenseAdjacency(c.graph.node_count(), c.edges);
    absl::StatusOr<double> h = TrueHomophily(c.graph, c.y);
    ASSERT_TRUE(h.ok()) << h.status();
    EXPECT_NEAR(*h, testing::BruteDyadHomophily(a, c.y_int), 1e-12);
    EXPECT_NEAR(*h, testing::BruteEgoHomophily(a, c.y_int), 1e-12);

    std::vector<double> actions(c.graph.node_count());
    for (double& x : actions) x = action(rng);
    EXPECT_NEAR(*TrueHomophily(c.graph, c.y, actions),
                testing::BruteEgoHomophily(a, c.y_int, actions), 1e-12);
  }
}

TEST(DecompositionPropertyTest, IdentityHoldsForArbitraryPredictions) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int trial = 0; trial < 300; ++trial) {
    RandomCase c = MakeCase(rng);
    NodeTable nodes;
    nodes.x.assign(c.graph.node_count(), 0.0);
    nodes.y = c.y;
    GroundTruthMask mask = GroundTruthMask::FromNodes(c.graph, {});
    EstimationInput in{&c.graph, &nodes, &mask};
    DyadFrame frame = *BuildDyadFrame(in);
    const int n = c.graph.node_count();
    std::vector<std::vector<double>> ego(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> alter = ego;
    std::vector<double> ego_pred(frame.size());
    std::vector<double> alter_pred(frame.size());
    double h_hat = 0.0;
    for (size_t r = 0; r < frame.size(); ++r) {
      ego_pred[r] = unit(rng);
      alter_pred[r] = unit(rng);
      ego[frame.ego[r]][frame.alter[r]] = ego_pred[r];
      alter[frame.ego[r]][frame.alter[r]] = alter_pred[r];
      h_hat += frame.weight[r] * ego_pred[r] * alter_pred[r];
    }
    double group = 0.0;
    for (uint8_t v : c.y) group += v;
    h_hat /= group;
    BiasTerms t = *BiasDecomposition(frame, ego_pred, alter_pred, group);
    const testing::BruteTerms brute = testing::BruteBiasTerms(
        testing::DenseAdjacency(n, c.edges), c.y_int, ego, alter);
    EXPECT_NEAR(t.r1, brute.r1, 1e-12);
    EXPECT_NEAR(t.r2, brute.r2, 1e-12);
    const double h = *TrueHomophily(c.graph, c.y);
    EXPECT_NEAR(h_hat, h - t.r1 - t.r2, 1e-10);
    EXPECT_NEAR(brute.h_hat, brute.h - brute.r1 - brute.r2, 1e-10);
  }
}

class FittedStrategyTest : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    ExperimentConfig cfg;
    cfg.n_nodes = 1500;
    const SampleLevel level =
        GetParam() % 2 == 0 ? SampleLevel::kNode : SampleLevel::kEdge;
    data_ = *MakeReplicationData(cfg, GetParam(), Dgp::kMain, level);
    input_.graph = &data_.graph;
    input_.nodes = &data_.nodes;
    input_.mask = &data_.mask;
    frame_ = *BuildDyadFrame(input_);
    oracle_ = *ComputeOracle(input_);
  }
  ReplicationData data_;
  EstimationInput input_;
  DyadFrame frame_;
  OracleTruth oracle_;
};

TEST_P(FittedStrategyTest, OracleEstimateEqualsTruthMinusBiasTerms) {
  for (ModelKind kind : {ModelKind::kNodeNoNetwork, ModelKind::kNode,
                         ModelKind::kEgoAlter, ModelKind::kEgoAlterAugmented}) {
    StrategyFit fit = *FitStrategy(kind, input_, frame_);
    EstimateRecord rec =
        *MakeRecord(fit, DenominatorMode::kOracle, input_, frame_, oracle_);
    ASSERT_TRUE(rec.r1.has_value());
    EXPECT_NEAR(rec.h_hat, rec.h_true - *rec.r1 - *rec.r2, 1e-10)
        << ModelKindName(kind);
  }
}

// The score equation for the 1/D_i column forces the weighted residuals
// of the training rows to sum to zero.
TEST_P(FittedStrategyTest, WeightedResidualsVanishOnTrainingRows) {
  for (ModelKind kind : {ModelKind::kEgoAlter, ModelKind::kDyad}) {
    const DesignTarget target =
        kind == ModelKind::kDyad ? DesignTarget::kDyad : DesignTarget::kEgo;
    Design design = *BuildDesign(kind, target, input_, frame_);
    DesignMatrix train = design.matrix.Subset(design.training_rows);
    std::vector<uint8_t> y;
    for (size_t r : design.training_rows) y.push_back(design.targets[r]);
    FittedModel m = *FitLogistic(train, y);
    if (!m.converged || m.ridge_used) continue;
    double weighted = 0.0;
    for (size_t k = 0; k < design.training_rows.size(); ++k) {
      weighted += frame_.inv_degree[design.training_rows[k]] * m.residual[k];
    }
    EXPECT_LE(std::abs(weighted), 1e-6 * train.rows()) << ModelKindName(kind);
  }
  Design nodes = *BuildDesign(ModelKind::kNode, DesignTarget::kNode, input_,
                              frame_);
  DesignMatrix train = nodes.matrix.Subset(nodes.training_rows);
  std::vector<uint8_t> y;
  for (size_t r : nodes.training_rows) y.push_back(nodes.targets[r]);
  FittedModel m = *FitLogistic(train, y);
  if (m.converged && !m.ridge_used) {
    for (size_t c = 0; c < train.cols(); ++c) {
      double score = 0.0;
      for (size_t r = 0; r < train.rows(); ++r) {
        score += train.at(r, c) * m.residual[r];
      }
      EXPECT_LE(std::abs(score), 1e-6 * train.rows());
    }
  }
}

TEST_P(FittedStrategyTest, BiasNeverExceedsMae) {
  std::vector<EstimateRecord> recs;
  for (ModelKind kind : kAllModelKinds) {
    StrategyFit fit = *FitStrategy(kind, input_, frame_);
    recs.push_back(
        *MakeRecord(fit, DenominatorMode::kPlugIn, input_, frame_, oracle_));
  }
  BiasMae m = *BiasAndMae(recs);
  EXPECT_LE(std::abs(m.bias), m.mae + 1e-15);
}

INSTANTIATE_TEST_SUITE_P(Replications, FittedStrategyTest,
                         ::testing::Range(0, 6));

TEST(RunnerPropertyTest, OutputIndependentOfWorkerCount) {
  ExperimentConfig cfg;
  cfg.n_nodes = 400;
  cfg.replications = 4;
  std::string reference;
  for (int workers : {1, 2, 4}) {
    cfg.workers = workers;
    BatteryResult r = *RunBattery(cfg);
    std::ostringstream out;
    WriteResultsCsv(r.records, out);
    if (reference.empty()) {
      reference = out.str();
    } else {
      EXPECT_EQ(out.str(), reference) << workers << " workers";
    }
  }
}

}  // namespace
}  // namespace homophily
