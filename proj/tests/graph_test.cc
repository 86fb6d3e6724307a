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

#include "homophily/graph.h"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace homophily {
namespace {

using ::testing::ElementsAre;

Graph MustGraph(int32_t n, std::vector<Edge> edges) {
  absl::StatusOr<Graph> g = Graph::FromEdges(n, std::move(edges));
  EXPECT_TRUE(g.ok()) << g.status();
  return *std::move(g);
}

bool Connected(const Graph& g) {
  if (g.node_count() == 0) return true;
  std::vector<uint8_t> seen(g.node_count(), 0);
  std::queue<NodeId> q;
  q.push(0);
  seen[0] = 1;
  int visited = 0;
  while (!q.empty()) {
    const NodeId v = q.front();
    q.pop();
    ++visited;
    for (NodeId u : g.neighbors(v)) {
      if (!seen[u]) {
        seen[u] = 1;
        q.push(u);
      }
    }
  }
  return visited == g.node_count();
}

TEST(GraphTest, FromEdgesCanonicalizesAndIndexes) {
  Graph g = MustGraph(4, {{2, 1}, {0, 1}, {3, 2}});
  EXPECT_EQ(g.edge_count(), 3);
  EXPECT_EQ(g.dyad_count(), 6);
  for (const Edge& e : g.edges()) EXPECT_LT(e.u, e.v);
  EXPECT_THAT(std::vector<NodeId>(g.neighbors(1).begin(), g.neighbors(1).end()),
              ElementsAre(0, 2));
  EXPECT_EQ(g.degree(2), 2);
  EXPECT_EQ(g.degree(0), 1);
  ASSERT_TRUE(g.FindEdge(3, 2).has_value());
  EXPECT_EQ(g.edge(*g.FindEdge(3, 2)), (Edge{2, 3}));
  EXPECT_FALSE(g.FindEdge(0, 3).has_value());
}

TEST(GraphTest, SlotsFollowEgoThenAlterOrder) {
  Graph g = MustGraph(3, {{0, 1}, {1, 2}, {0, 2}});
  for (NodeId v = 0; v < 3; ++v) {
    for (int64_t s = g.slot_begin(v); s < g.slot_end(v); ++s) {
      EXPECT_EQ(g.slot_ego(s), v);
      const Edge& e = g.edge(g.slot_edge(s));
      EXPECT_TRUE((e.u == v && e.v == g.slot_alter(s)) ||
                  (e.v == v && e.u == g.slot_alter(s)));
    }
  }
}

TEST(GraphTest, RejectsSelfLoopsDuplicatesAndBadIds) {
  EXPECT_FALSE(Graph::FromEdges(3, {{1, 1}}).ok());
  EXPECT_FALSE(Graph::FromEdges(3, {{0, 1}, {1, 0}}).ok());
  EXPECT_FALSE(Graph::FromEdges(3, {{0, 3}}).ok());
  EXPECT_FALSE(Graph::FromEdges(3, {{-1, 2}}).ok());
  EXPECT_FALSE(Graph::FromEdges(-1, {}).ok());
}

TEST(DirectedDyadsTest, SingleEdge) {
  Graph g = MustGraph(3, {{1, 2}});
  EXPECT_THAT(DirectedDyads(g),
              ElementsAre(DirectedDyad{1, 2}, DirectedDyad{2, 1}));
}

TEST(DirectedDyadsTest, EmptyGraph) {
  EXPECT_TRUE(DirectedDyads(MustGraph(0, {})).empty());
  EXPECT_TRUE(DirectedDyads(MustGraph(5, {})).empty());
}

TEST(DirectedDyadsTest, TriangleIsSortedAndComplete) {
  std::vector<DirectedDyad> d = DirectedDyads(MustGraph(3, {{0, 1}, {1, 2}, {0, 2}}));
  ASSERT_EQ(d.size(), 6u);
  EXPECT_TRUE(std::is_sorted(d.begin(), d.end()));
  EXPECT_TRUE(std::adjacent_find(d.begin(), d.end()) == d.end());
}

TEST(PreferentialAttachmentTest, SeedOnlyGraphIsComplete) {
  Rng rng(1);
  absl::StatusOr<Graph> g = GeneratePreferentialAttachment({6, 5, 0.3}, rng);
  ASSERT_TRUE(g.ok());
  EXPECT_EQ(g->edge_count(), 15);
  for (NodeId v = 0; v < 6; ++v) EXPECT_EQ(g->degree(v), 5);
}

TEST(PreferentialAttachmentTest, EdgeCountMatchesConstruction) {
  Rng rng(2);
  absl::StatusOr<Graph> g = GeneratePreferentialAttachment({100, 2, 1.0}, rng);
  ASSERT_TRUE(g.ok());
  EXPECT_EQ(g->edge_count(), 197);
  EXPECT_EQ(g->edge_count(), testing::PreferentialAttachmentEdgeCount(100, 2));
}

TEST(PreferentialAttachmentTest, ArrivalsAttachToExactlyMEarlierNodes) {
  Rng rng(3);
  const int m = 5;
  absl::StatusOr<Graph> g = GeneratePreferentialAttachment({400, m, 0.8}, rng);
  ASSERT_TRUE(g.ok());
  std::vector<int> arrivals(g->node_count(), 0);
  for (const Edge& e : g->edges()) ++arrivals[e.v];
  for (NodeId v = m + 1; v < g->node_count(); ++v) EXPECT_EQ(arrivals[v], m);
  EXPECT_TRUE(Connected(*g));
  int64_t degree_sum = 0;
  for (NodeId v = 0; v < g->node_count(); ++v) degree_sum += g->degree(v);
  EXPECT_EQ(degree_sum, 2 * g->edge_count());
  EXPECT_EQ(static_cast<int64_t>(DirectedDyads(*g).size()), degree_sum);
}

TEST(PreferentialAttachmentTest, DeterministicGivenSeed) {
  Rng a(99);
  Rng b(99);
  Graph ga = *GeneratePreferentialAttachment({500, 3, 0.8}, a);
  Graph gb = *GeneratePreferentialAttachment({500, 3, 0.8}, b);
  EXPECT_TRUE(std::equal(ga.edges().begin(), ga.edges().end(),
                         gb.edges().begin(), gb.edges().end()));
}

TEST(PreferentialAttachmentTest, HeavyTailedDegrees) {
  int heavy = 0;
  for (int r = 0; r < 100; ++r) {
    Rng rng(1000 + r);
    Graph g = *GeneratePreferentialAttachment({1000, 5, 0.8}, rng);
    std::vector<int> d(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) d[v] = g.degree(v);
    std::sort(d.begin(), d.end());
    if (d.back() > 5 * d[d.size() / 2]) ++heavy;
  }
  EXPECT_EQ(heavy, 100);
}

TEST(PreferentialAttachmentTest, ZeroExponentIsUniformAttachment) {
  // Early nodes gain about m * H(n) extra links under uniform attachment;
  // with k = 1 they gain far more.
  double uniform_max = 0.0;
  double linear_max = 0.0;
  for (int r = 0; r < 20; ++r) {
    Rng a(r);
    Rng b(r);
    Graph u = *GeneratePreferentialAttachment({2000, 2, 0.0}, a);
    Graph l = *GeneratePreferentialAttachment({2000, 2, 1.0}, b);
    int mu = 0;
    int ml = 0;
    for (NodeId v = 0; v < 2000; ++v) {
      mu = std::max(mu, u.degree(v));
      ml = std::max(ml, l.degree(v));
    }
    uniform_max += mu;
    linear_max += ml;
  }
  EXPECT_LT(uniform_max, 0.5 * linear_max);
}

TEST(PreferentialAttachmentTest, RejectsInvalidParameters) {
  Rng rng(4);
  EXPECT_FALSE(GeneratePreferentialAttachment({5, 5, 0.8}, rng).ok());
  EXPECT_FALSE(GeneratePreferentialAttachment({4, 5, 0.8}, rng).ok());
  EXPECT_FALSE(GeneratePreferentialAttachment({10, 0, 0.8}, rng).ok());
  EXPECT_FALSE(GeneratePreferentialAttachment({10, 2, -0.1}, rng).ok());
}

TEST(EdgeListCsvTest, WritesCanonicalRows) {
  std::ostringstream out;
  WriteEdgeListCsv(MustGraph(3, {{2, 0}, {1, 2}}), out);
  EXPECT_EQ(out.str(), "src,dst\n0,2\n1,2\n");
}

}  // namespace
}  // namespace homophily
