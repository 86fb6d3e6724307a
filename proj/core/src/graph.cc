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
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"

namespace homophily {
namespace {

// Binary indexed tree over nonnegative weights supporting point updates and
// sampling by cumulative weight.
class FenwickSampler {
 public:
  explicit FenwickSampler(size_t capacity)
      : tree_(capacity + 1, 0.0), weights_(capacity, 0.0) {}

  void Set(size_t i, double w) {
    const double delta = w - weights_[i];
    weights_[i] = w;
    total_ += delta;
    for (size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) {
      tree_[k] += delta;
    }
  }

  double weight(size_t i) const { return weights_[i]; }
  double total() const { return total_; }

  // Smallest index whose inclusive prefix sum exceeds u.
  size_t Find(double u) const {
    size_t pos = 0;
    const size_t n = tree_.size() - 1;
    for (size_t step = std::bit_floor(n); step > 0; step >>= 1) {
      if (pos + step <= n && tree_[pos + step] <= u) {
        pos += step;
        u -= tree_[pos];
      }
    }
    return std::min(pos, n - 1);
  }

 private:
  std::vector<double> tree_;
  std::vector<double> weights_;
  double total_ = 0.0;
};

}  // namespace

absl::StatusOr<Graph> Graph::FromEdges(int32_t node_count,
                                       std::vector<Edge> edges) {
  if (node_count < 0) {
    return absl::InvalidArgumentError("node_count must be nonnegative");
  }
  for (Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "edge (%d, %d) references a node outside [0, %d)", e.u, e.v,
          node_count));
    }
    if (e.u == e.v) {
      return absl::InvalidArgumentError(
          absl::StrFormat("self-loop on node %d", e.u));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  auto dup = std::adjacent_find(edges.begin(), edges.end());
  if (dup != edges.end()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("duplicate edge (%d, %d)", dup->u, dup->v));
  }

  Graph g;
  g.node_count_ = node_count;
  g.offsets_.assign(static_cast<size_t>(node_count) + 1, 0);
  for (const Edge& e : edges) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (int32_t v = 0; v < node_count; ++v) {
    g.offsets_[v + 1] += g.offsets_[v];
  }
  const size_t slots = 2 * edges.size();
  std::vector<std::pair<NodeId, EdgeId>> entries(slots);
  std::vector<int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (size_t id = 0; id < edges.size(); ++id) {
    const Edge& e = edges[id];
    entries[cursor[e.u]++] = {e.v, static_cast<EdgeId>(id)};
    entries[cursor[e.v]++] = {e.u, static_cast<EdgeId>(id)};
  }
  g.adjacency_.resize(slots);
  g.slot_edges_.resize(slots);
  g.slot_egos_.resize(slots);
  for (int32_t v = 0; v < node_count; ++v) {
    std::sort(entries.begin() + g.offsets_[v],
              entries.begin() + g.offsets_[v + 1]);
    for (int64_t s = g.offsets_[v]; s < g.offsets_[v + 1]; ++s) {
      g.adjacency_[s] = entries[s].first;
      g.slot_edges_[s] = entries[s].second;
      g.slot_egos_[s] = v;
    }
  }
  g.edges_ = std::move(edges);
  return g;
}

std::optional<EdgeId> Graph::FindEdge(NodeId a, NodeId b) const {
  if (a < 0 || b < 0 || a >= node_count_ || b >= node_count_) {
    return std::nullopt;
  }
  auto nbrs = neighbors(a);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b);
  if (it == nbrs.end() || *it != b) return std::nullopt;
  return slot_edges_[offsets_[a] + (it - nbrs.begin())];
}

absl::StatusOr<Graph> GeneratePreferentialAttachment(
    const PreferentialAttachmentParams& params, Rng& rng) {
  const int32_t n = params.node_count;
  const int32_t m = params.links_per_node;
  const double k = params.exponent;
  if (m < 1) {
    return absl::InvalidArgumentError("links_per_node must be at least 1");
  }
  if (n <= m) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "node_count (%d) must exceed links_per_node (%d)", n, m));
  }
  if (!(k >= 0.0) || !std::isfinite(k)) {
    return absl::InvalidArgumentError("attachment exponent must be >= 0");
  }

  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(m) * (m + 1) / 2 +
                static_cast<size_t>(m) * (n - m - 1));
  std::vector<int32_t> degree(n, 0);
  for (NodeId u = 0; u <= m; ++u) {
    for (NodeId v = u + 1; v <= m; ++v) edges.push_back({u, v});
    degree[u] = m;
  }

  FenwickSampler sampler(n);
  for (NodeId v = 0; v <= m; ++v) sampler.Set(v, std::pow(degree[v], k));

  std::vector<NodeId> targets;
  targets.reserve(m);
  for (NodeId arrival = m + 1; arrival < n; ++arrival) {
    targets.clear();
    while (static_cast<int32_t>(targets.size()) < m) {
      std::uniform_real_distribution<double> unif(0.0, sampler.total());
      const NodeId pick = static_cast<NodeId>(sampler.Find(unif(rng)));
      // Rounding can land on a withdrawn or not-yet-arrived slot.
      if (pick >= arrival || sampler.weight(pick) <= 0.0) continue;
      targets.push_back(pick);
      sampler.Set(pick, 0.0);
    }
    for (NodeId t : targets) {
      edges.push_back({t, arrival});
      ++degree[t];
      sampler.Set(t, std::pow(degree[t], k));
    }
    degree[arrival] = m;
    sampler.Set(arrival, std::pow(m, k));
  }
  return Graph::FromEdges(n, std::move(edges));
}

std::vector<DirectedDyad> DirectedDyads(const Graph& graph) {
  std::vector<DirectedDyad> dyads;
  dyads.reserve(graph.dyad_count());
  for (int64_t s = 0; s < graph.dyad_count(); ++s) {
    dyads.push_back({graph.slot_ego(s), graph.slot_alter(s)});
  }
  return dyads;
}

void WriteEdgeListCsv(const Graph& graph, std::ostream& out) {
  out << "src,dst\n";
  for (const Edge& e : graph.edges()) out << e.u << ',' << e.v << '\n';
}

}  // namespace homophily
