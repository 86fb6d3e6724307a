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

#ifndef HOMOPHILY_GRAPH_H_
#define HOMOPHILY_GRAPH_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "homophily/rng.h"

namespace homophily {

using NodeId = int32_t;
using EdgeId = int32_t;

// Undirected edge in canonical orientation (u < v).
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct DirectedDyad {
  NodeId ego = 0;
  NodeId alter = 0;
  friend auto operator<=>(const DirectedDyad&, const DirectedDyad&) = default;
};

// Immutable undirected simple graph stored in compressed sparse row form.
//
// Adjacency slots are sorted by (ego, alter), so slot index r is also the
// index of the r-th directed dyad returned by DirectedDyads(). Every slot
// carries the id of the undirected edge it belongs to.
class Graph {
 public:
  Graph() = default;

  // Validates ids, rejects self-loops and duplicate edges (in either
  // orientation). Edges are stored canonicalized and sorted.
  static absl::StatusOr<Graph> FromEdges(int32_t node_count,
                                         std::vector<Edge> edges);

  int32_t node_count() const { return node_count_; }
  int64_t edge_count() const { return static_cast<int64_t>(edges_.size()); }
  int64_t dyad_count() const { return static_cast<int64_t>(adjacency_.size()); }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v],
            adjacency_.data() + offsets_[v + 1]};
  }
  int32_t degree(NodeId v) const {
    return static_cast<int32_t>(offsets_[v + 1] - offsets_[v]);
  }

  // Range of dyad slots with ego v.
  int64_t slot_begin(NodeId v) const { return offsets_[v]; }
  int64_t slot_end(NodeId v) const { return offsets_[v + 1]; }
  NodeId slot_alter(int64_t slot) const { return adjacency_[slot]; }
  EdgeId slot_edge(int64_t slot) const { return slot_edges_[slot]; }
  NodeId slot_ego(int64_t slot) const { return slot_egos_[slot]; }

  std::optional<EdgeId> FindEdge(NodeId a, NodeId b) const;

 private:
  int32_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<int64_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::vector<EdgeId> slot_edges_;
  std::vector<NodeId> slot_egos_;
};

struct PreferentialAttachmentParams {
  int32_t node_count = 4000;
  int32_t links_per_node = 5;
  double exponent = 0.8;
};

// Nonlinear preferential attachment. Starts from a complete graph on m + 1
// nodes; every later node attaches to m distinct existing nodes drawn
// without replacement with probability proportional to degree^k, where the
// degrees are frozen for the duration of one arrival.
absl::StatusOr<Graph> GeneratePreferentialAttachment(
    const PreferentialAttachmentParams& params, Rng& rng);

// Both orientations of every edge, sorted by ego then alter.
std::vector<DirectedDyad> DirectedDyads(const Graph& graph);

// `src,dst` header, one canonical (src < dst) edge per row, dense ids.
void WriteEdgeListCsv(const Graph& graph, std::ostream& out);

}  // namespace homophily

#endif  // HOMOPHILY_GRAPH_H_
