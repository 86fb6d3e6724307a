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

#include "homophily/metrics.h"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "homophily/runner.h"
#include "oracles.h"

namespace homophily {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

EstimateRecord Record(double h_true, double h_hat) {
  EstimateRecord r;
  r.h_true = h_true;
  r.h_hat = h_hat;
  r.relative_error = (h_hat - h_true) / h_true;
  return r;
}

TEST(BiasAndMaeTest, HandComputed) {
  const std::vector<EstimateRecord> recs = {Record(0.5, 0.55), Record(0.5, 0.4)};
  BiasMae m = *BiasAndMae(recs);
  EXPECT_NEAR(m.bias, (0.1 - 0.2) / 2.0, 1e-12);
  EXPECT_NEAR(m.mae, (0.1 + 0.2) / 2.0, 1e-12);
  EXPECT_LE(std::abs(m.bias), m.mae);
  EXPECT_FALSE(BiasAndMae({}).ok());
}

TEST(AucTest, SmallCases) {
  const std::vector<double> s = {0.1, 0.4, 0.35, 0.8};
  const std::vector<uint8_t> y = {0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(*Auc(s, y), 0.75);
  const std::vector<double> tied = {0.5, 0.5};
  EXPECT_DOUBLE_EQ(*Auc(tied, std::vector<uint8_t>{0, 1}), 0.5);
  EXPECT_EQ(Auc(s, std::vector<uint8_t>{1, 1, 1, 1}).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_FALSE(Auc(s, std::vector<uint8_t>{1}).ok());
}

TEST(AucTest, MatchesBruteForceOnFiftyNodes) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coarse(0, 9);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(50);
    std::vector<uint8_t> y(50);
    for (int i = 0; i < 50; ++i) {
      s[i] = 0.1 * coarse(rng);  // plenty of ties
      y[i] = coin(rng);
    }
    y[0] = 1;
    y[1] = 0;
    EXPECT_NEAR(*Auc(s, y), testing::BruteAuc(s, y), 1e-12);
  }
}

TEST(AucTest, InvariantUnderMonotoneTransforms) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin(0.5);
  std::vector<double> s(300);
  std::vector<uint8_t> y(300);
  for (int i = 0; i < 300; ++i) {
    s[i] = normal(rng);
    y[i] = coin(rng);
  }
  std::vector<double> t(s.size());
  for (size_t i = 0; i < s.size(); ++i) t[i] = std::exp(3.0 * s[i]) - 2.0;
  EXPECT_DOUBLE_EQ(*Auc(s, y), *Auc(t, y));
}

TEST(NodeLevelMetricsTest, AccuracyUsesHalfThreshold) {
  const std::vector<double> p = {0.5, 0.49, 0.9, 0.2};
  const std::vector<uint8_t> y = {1, 1, 1, 0};
  NodeMetrics m = *NodeLevelMetrics(p, y);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.75);
  EXPECT_DOUBLE_EQ(m.auc, 1.0);
}

SummaryCell Cell(ModelKind k, double bias, double mae) {
  SummaryCell c;
  c.sampling = "random_node";
  c.dgp = "main";
  c.model = k;
  c.replications = 10;
  c.bias = bias;
  c.mae = mae;
  return c;
}

TEST(SummaryTest, BestModelsAndTies) {
  const std::vector<SummaryCell> row = {
      Cell(ModelKind::kNode, -0.03, 0.05),
      Cell(ModelKind::kEgoAlter, 0.01, 0.04),
      Cell(ModelKind::kEgoAlterAugmented, -0.01, 0.04)};
  EXPECT_THAT(BestModels(row, TableMetric::kBias),
              ElementsAre(ModelKind::kEgoAlter, ModelKind::kEgoAlterAugmented));
  EXPECT_THAT(BestModels(row, TableMetric::kMae),
              ElementsAre(ModelKind::kEgoAlter, ModelKind::kEgoAlterAugmented));
}

TEST(SummaryTest, FailedReplicationIsDroppedFromItsWholeGroup) {
  std::vector<EstimateRecord> recs;
  for (int rep = 0; rep < 3; ++rep) {
    for (ModelKind k : {ModelKind::kNode, ModelKind::kDyad}) {
      EstimateRecord r = Record(0.5, 0.5 + 0.01 * rep);
      r.rep = rep;
      r.model = k;
      r.dgp = "main";
      r.sampling = "random_edge";
      if (rep == 2 && k == ModelKind::kDyad) r.flag = "error: boom";
      recs.push_back(r);
    }
  }
  std::vector<SummaryCell> s = Summarize(recs);
  ASSERT_EQ(s.size(), 2u);
  for (const SummaryCell& c : s) {
    EXPECT_EQ(c.replications, 2u);
    EXPECT_EQ(c.excluded, 1u);
    EXPECT_NEAR(c.bias, 0.01, 1e-12);
  }
}

TEST(SummaryTest, RowOrderPutsEdgeDesignsFirst) {
  EXPECT_TRUE(SummaryRowLess("random_edge", "sampled", "random_node",
                             "independent"));
  EXPECT_TRUE(SummaryRowLess("random_node", "independent", "random_node",
                             "degree"));
  EXPECT_FALSE(SummaryRowLess("random_node", "main", "random_edge", "main"));
}

TEST(SummaryTest, TableMarksBestCell) {
  const std::vector<SummaryCell> row = {Cell(ModelKind::kNode, -0.03, 0.05),
                                        Cell(ModelKind::kDyad, 0.002, 0.06)};
  std::ostringstream out;
  WriteSummaryTableCsv(row, TableMetric::kBias, DenominatorMode::kOracle, out);
  EXPECT_EQ(out.str(), "sampling,dgp,node,dyad\nrandom_node,main,-0.0300,0.0020*\n");
  std::ostringstream mae;
  WriteSummaryTableCsv(row, TableMetric::kMae, DenominatorMode::kOracle, mae);
  EXPECT_THAT(mae.str(), HasSubstr("0.0500*,0.0600\n"));
}

class DiagnosticTest : public ::testing::Test {
 protected:
  void Load(Dgp dgp) {
    ExperimentConfig cfg;
    cfg.n_nodes = 1000;
    data_ = *MakeReplicationData(cfg, 3, dgp, SampleLevel::kEdge);
    input_.graph = &data_.graph;
    input_.nodes = &data_.nodes;
    input_.mask = &data_.mask;
    frame_ = *BuildDyadFrame(input_);
  }
  ReplicationData data_;
  EstimationInput input_;
  DyadFrame frame_;
};

TEST_F(DiagnosticTest, FoldsPartitionLabeledDyads) {
  Load(Dgp::kMain);
  Rng rng(1);
  DiagnosticResult d = *CvResidualDiagnostic(ModelKind::kDyad, input_, frame_,
                                             {5, 50, 0.95}, rng);
  ASSERT_EQ(d.fold_of_row.size(), frame_.size());
  ASSERT_EQ(d.fold_sums.size(), 5u);
  size_t labeled = 0;
  std::vector<size_t> sizes(5, 0);
  for (size_t r = 0; r < frame_.size(); ++r) {
    if (frame_.dyad_labeled[r]) {
      ++labeled;
      ASSERT_GE(d.fold_of_row[r], 0);
      ++sizes[d.fold_of_row[r]];
    } else {
      EXPECT_EQ(d.fold_of_row[r], -1);
    }
  }
  EXPECT_EQ(d.dyads, labeled);
  EXPECT_EQ(sizes, d.fold_sizes);
  // Both orientations of an edge share a fold.
  for (size_t r = 0; r < frame_.size(); ++r) {
    for (size_t s = r + 1; s < frame_.size() && d.fold_of_row[r] >= 0; ++s) {
      if (frame_.edge[s] == frame_.edge[r]) {
        EXPECT_EQ(d.fold_of_row[s], d.fold_of_row[r]);
      }
    }
  }
  double total = 0.0;
  for (double f : d.fold_sums) total += f;
  EXPECT_NEAR(total, d.total, 1e-9);
  EXPECT_LE(d.null_low, d.null_high);
  EXPECT_EQ(d.flagged, d.total < d.null_low || d.total > d.null_high);
}

TEST_F(DiagnosticTest, DeterministicGivenSeed) {
  Load(Dgp::kIndependent);
  Rng a(9);
  Rng b(9);
  DiagnosticResult x = *CvResidualDiagnostic(ModelKind::kEgoAlter, input_,
                                             frame_, {}, a);
  DiagnosticResult y = *CvResidualDiagnostic(ModelKind::kEgoAlter, input_,
                                             frame_, {}, b);
  EXPECT_EQ(x.fold_sums, y.fold_sums);
  EXPECT_EQ(x.null_low, y.null_low);
  EXPECT_EQ(x.flagged, y.flagged);
}

TEST_F(DiagnosticTest, RejectsBadOptions) {
  Load(Dgp::kIndependent);
  Rng rng(1);
  EXPECT_FALSE(CvResidualDiagnostic(ModelKind::kDyad, input_, frame_,
                                    {1, 50, 0.95}, rng)
                   .ok());
  EXPECT_FALSE(CvResidualDiagnostic(ModelKind::kDyad, input_, frame_,
                                    {5, 0, 0.95}, rng)
                   .ok());
  EXPECT_FALSE(CvResidualDiagnostic(ModelKind::kNoModel, input_, frame_, {},
                                    rng)
                   .ok());
}

}  // namespace
}  // namespace homophily
