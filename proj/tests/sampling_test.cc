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

#include "homophily/sampling.h"

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "gtest/gtest.h"
#include "homophily/graph.h"
#include "homophily/numeric.h"
#include "homophily/simgen.h"

namespace homophily {
namespace {

Graph Path(int n) {
  std::vector<Edge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  return *Graph::FromEdges(n, edges);
}

Graph DefaultGraph(uint64_t seed) {
  Rng rng(seed);
  return *GeneratePreferentialAttachment({}, rng);
}

TEST(RandomNodeSampleTest, DefaultScaleCount) {
  Graph g = DefaultGraph(1);
  Rng rng(2);
  GroundTruthMask mask = *RandomNodeSample(g, 0.20, rng);
  EXPECT_EQ(mask.labeled_nodes().size(), 800u);
  EXPECT_TRUE(CheckMask(g, mask, SampleLevel::kNode).ok());
}

TEST(RandomNodeSampleTest, SingleNodeOnPathHasNoDyads) {
  Graph g = Path(5);
  Rng rng(3);
  GroundTruthMask mask = *RandomNodeSample(g, 0.2, rng);
  EXPECT_EQ(mask.labeled_nodes().size(), 1u);
  EXPECT_EQ(mask.labeled_dyad_count(), 0u);
}

TEST(RandomNodeSampleTest, AllButOneNode) {
  Graph g = Path(10);
  Rng rng(4);
  GroundTruthMask mask = *RandomNodeSample(g, 0.9, rng);
  ASSERT_EQ(mask.labeled_nodes().size(), 9u);
  NodeId excluded = -1;
  for (NodeId v = 0; v < 10; ++v) {
    if (!mask.node_labeled(v)) excluded = v;
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const bool touches = g.edge(e).u == excluded || g.edge(e).v == excluded;
    EXPECT_EQ(mask.edge_labeled(e), !touches);
  }
}

TEST(RandomNodeSampleTest, RejectsEmptyAndInvalidFractions) {
  Graph g = Path(5);
  Rng rng(5);
  EXPECT_FALSE(RandomNodeSample(g, 0.05, rng).ok());
  EXPECT_FALSE(RandomNodeSample(g, 0.0, rng).ok());
  EXPECT_FALSE(RandomNodeSample(g, 1.0, rng).ok());
}

TEST(RandomEdgeSampleTest, DefaultScaleCounts) {
  for (uint64_t seed = 10; seed < 15; ++seed) {
    Graph g = DefaultGraph(seed);
    Rng rng(seed);
    GroundTruthMask mask = *RandomEdgeSample(g, 0.025, rng);
    EXPECT_EQ(mask.labeled_edges().size(),
              static_cast<size_t>(std::llround(0.025 * g.edge_count())));
    EXPECT_EQ(mask.labeled_dyad_count(), 2 * mask.labeled_edges().size());
    EXPECT_NEAR(static_cast<double>(mask.labeled_nodes().size()), 800.0, 120.0);
    EXPECT_TRUE(CheckMask(g, mask, SampleLevel::kEdge).ok());
  }
}

TEST(RandomEdgeSampleTest, OneEdge) {
  Graph g = Path(11);
  Rng rng(6);
  GroundTruthMask mask = *RandomEdgeSample(g, 0.1, rng);
  EXPECT_EQ(mask.labeled_nodes().size(), 2u);
  EXPECT_EQ(mask.labeled_dyad_count(), 2u);
}

TEST(RandomEdgeSampleTest, EveryEdge) {
  Graph g = Path(11);
  Rng rng(7);
  GroundTruthMask mask = *RandomEdgeSample(g, 0.96, rng);
  EXPECT_EQ(mask.labeled_dyad_count(), static_cast<size_t>(g.dyad_count()));
}

TEST(CalibrateAlphaTest, ClosedForms) {
  const std::vector<double> zeros(1000, 0.0);
  EXPECT_NEAR(*CalibrateAlpha(zeros, 500.0), 0.0, 1e-9);
  EXPECT_NEAR(*CalibrateAlpha(zeros, 250.0), std::log(1.0 / 3.0), 1e-9);
}

TEST(CalibrateAlphaTest, ExpectedCountWithinHalf) {
  std::vector<double> scores;
  for (int i = 0; i < 2000; ++i) scores.push_back(0.01 * (i % 137) - 0.3);
  const double alpha = *CalibrateAlpha(scores, 321.0);
  double expected = 0.0;
  for (double s : scores) expected += Logistic(alpha + s);
  EXPECT_NEAR(expected, 321.0, 0.5);
}

TEST(CalibrateAlphaTest, Errors) {
  const std::vector<double> zeros(10, 0.0);
  EXPECT_FALSE(CalibrateAlpha(zeros, 0.0).ok());
  EXPECT_FALSE(CalibrateAlpha(zeros, 10.0).ok());
  // Every unit is almost surely included even at alpha = -50.
  const std::vector<double> huge(10, 200.0);
  EXPECT_EQ(CalibrateAlpha(huge, 5.0).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(BiasedSampleTest, ConstantCovariatesReduceToConstantProbability) {
  // A cycle: every degree equals 2.
  std::vector<Edge> edges;
  for (int v = 0; v < 100; ++v) edges.push_back({v, (v + 1) % 100});
  Graph g = *Graph::FromEdges(100, edges);
  NodeTable nodes;
  nodes.x.assign(100, 0.7);
  Rng rng(8);
  double alpha = 0.0;
  ASSERT_TRUE(BiasedNodeSample(g, nodes, 25.0, {}, rng, &alpha).ok());
  EXPECT_NEAR(Logistic(alpha + 0.05 * 2 + 0.2 * 0.7), 0.25, 1e-9);
  ASSERT_TRUE(BiasedEdgeSample(g, nodes, 40.0, {}, rng, &alpha).ok());
  EXPECT_NEAR(Logistic(alpha + 0.05 * 4 + 0.2 * 1.4), 0.40, 1e-9);
}

double MeanDegree(const Graph& g, std::span<const NodeId> nodes) {
  double s = 0.0;
  for (NodeId v : nodes) s += g.degree(v);
  return s / nodes.size();
}

TEST(BiasedSampleTest, OversamplesHighDegreeNodes) {
  int node_higher = 0;
  int edge_higher = 0;
  for (int r = 0; r < 100; ++r) {
    Rng rng(100 + r);
    Graph g = *GeneratePreferentialAttachment({1000, 5, 0.8}, rng);
    NodeTable nodes = *GenerateFeatures(g, Dgp::kMain, {}, rng);
    const double population = 2.0 * g.edge_count() / g.node_count();
    GroundTruthMask nm = *BiasedNodeSample(g, nodes, 200.0, {}, rng);
    GroundTruthMask em = *BiasedEdgeSample(g, nodes, 125.0, {}, rng);
    node_higher += MeanDegree(g, nm.labeled_nodes()) > population;
    double edge_degree = 0.0;
    for (EdgeId e : em.labeled_edges()) {
      edge_degree += g.degree(g.edge(e).u) + g.degree(g.edge(e).v);
    }
    edge_higher += edge_degree / (2.0 * em.labeled_edges().size()) > population;
    EXPECT_TRUE(CheckMask(g, nm, SampleLevel::kNode).ok());
    EXPECT_TRUE(CheckMask(g, em, SampleLevel::kEdge).ok());
  }
  EXPECT_EQ(node_higher, 100);
  EXPECT_EQ(edge_higher, 100);
}

// Calibration fixes the expected sample size; realized sizes carry
// Bernoulli noise of about sqrt(target) around it.
TEST(BiasedSampleTest, CalibratedCountsNearTarget) {
  const int reps = 200;
  double node_total = 0.0;
  double edge_total = 0.0;
  double edge_target_total = 0.0;
  int node_within = 0;
  for (int r = 0; r < reps; ++r) {
    Graph g = DefaultGraph(2000 + r);
    Rng rng(3000 + r);
    NodeTable nodes = *GenerateFeatures(g, Dgp::kMain, {}, rng);
    const double edge_target = std::llround(0.025 * g.edge_count());
    double alpha = 0.0;
    GroundTruthMask nm = *BiasedNodeSample(g, nodes, 800.0, {}, rng, &alpha);
    double expected = 0.0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      expected += Logistic(alpha + 0.05 * g.degree(v) + 0.2 * nodes.x[v]);
    }
    EXPECT_LE(std::abs(expected - 800.0), 0.05 * 800.0);
    GroundTruthMask em = *BiasedEdgeSample(g, nodes, edge_target, {}, rng);
    node_total += nm.labeled_nodes().size();
    edge_total += em.labeled_edges().size();
    edge_target_total += edge_target;
    node_within += std::abs(nm.labeled_nodes().size() - 800.0) <= 40.0;
  }
  EXPECT_NEAR(node_total / reps, 800.0, 0.01 * 800.0);
  EXPECT_NEAR(edge_total / edge_target_total, 1.0, 0.01);
  // +-40 is about 1.6 standard deviations of the realized count.
  EXPECT_GE(node_within, 160);
}

TEST(RandomSampleTest, InclusionIsExchangeable) {
  Graph g = Path(20);
  std::vector<int> node_hits(20, 0);
  std::vector<int> edge_hits(g.edge_count(), 0);
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) {
    Rng rng(r);
    GroundTruthMask nm = *RandomNodeSample(g, 0.25, rng);
    for (NodeId v : nm.labeled_nodes()) ++node_hits[v];
    GroundTruthMask em = *RandomEdgeSample(g, 0.25, rng);
    for (EdgeId e : em.labeled_edges()) ++edge_hits[e];
  }
  auto check = [&](const std::vector<int>& hits, double p) {
    const double se = std::sqrt(reps * p * (1.0 - p));
    for (int h : hits) EXPECT_LT(std::abs(h - reps * p), 3.0 * se);
  };
  check(node_hits, 5.0 / 20.0);
  check(edge_hits, 5.0 / 19.0);
}

TEST(GroundTruthMaskTest, FromNodesAndEdgesAddsEndpoints) {
  Graph g = Path(4);
  GroundTruthMask mask =
      GroundTruthMask::FromNodesAndEdges(g, {0}, {*g.FindEdge(2, 3)});
  EXPECT_EQ(mask.labeled_nodes().size(), 3u);
  EXPECT_TRUE(mask.node_labeled(2));
  EXPECT_FALSE(mask.edge_labeled(*g.FindEdge(0, 1)));
  EXPECT_TRUE(CheckMask(g, mask, SampleLevel::kEdge).ok());
  EXPECT_FALSE(CheckMask(g, GroundTruthMask::FromNodesAndEdges(g, {1, 2}, {}),
                         SampleLevel::kNode)
                   .ok());
}

TEST(MaskCsvTest, NodesAndBothOrientations) {
  Graph g = Path(3);
  GroundTruthMask mask = GroundTruthMask::FromEdges(g, {*g.FindEdge(1, 2)});
  std::ostringstream nodes;
  std::ostringstream dyads;
  WriteMaskNodesCsv(mask, nodes);
  WriteMaskDyadsCsv(g, mask, dyads);
  EXPECT_EQ(nodes.str(), "node_id\n1\n2\n");
  EXPECT_EQ(dyads.str(), "src,dst\n1,2\n2,1\n");
}

TEST(SamplingNamesTest, Names) {
  EXPECT_EQ(SamplingName(SampleLevel::kNode, SampleMode::kRandom), "random_node");
  EXPECT_EQ(SamplingName(SampleLevel::kEdge, SampleMode::kBiased), "biased_edge");
  EXPECT_EQ(*ParseSampleLevel("edge"), SampleLevel::kEdge);
  EXPECT_FALSE(ParseSampleLevel("dyad").ok());
}

}  // namespace
}  // namespace homophily
