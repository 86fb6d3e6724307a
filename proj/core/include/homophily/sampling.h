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

#ifndef HOMOPHILY_SAMPLING_H_
#define HOMOPHILY_SAMPLING_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "homophily/graph.h"
#include "homophily/rng.h"
#include "homophily/simgen.h"

namespace homophily {

enum class SampleLevel { kNode, kEdge };
enum class SampleMode { kRandom, kBiased };

struct SamplePlan {
  SampleLevel level = SampleLevel::kNode;
  SampleMode mode = SampleMode::kRandom;
  // Fraction of nodes (node level) or undirected edges (edge level).
  double target_fraction = 0.2;
  // Set once a biased plan has been calibrated.
  std::optional<double> alpha;
};

// "random_node", "random_edge", "biased_node", "biased_edge".
std::string SamplingName(SampleLevel level, SampleMode mode);
absl::string_view SampleLevelName(SampleLevel level);
absl::StatusOr<SampleLevel> ParseSampleLevel(absl::string_view name);

// Coefficients of the inclusion logits used by the biased designs.
struct BiasedSamplingCoefs {
  double degree = 0.05;
  double feature = 0.2;
};

// Ground-truth set. Labeled dyads are always stored as undirected edges
// whose two orientations are both labeled.
//
// Node-level sampling: labeled edges are exactly the edges with both
// endpoints labeled. Edge-level sampling: both endpoints of every sampled
// edge are labeled nodes.
class GroundTruthMask {
 public:
  GroundTruthMask() = default;

  static GroundTruthMask FromNodes(const Graph& graph,
                                   std::vector<NodeId> nodes);
  static GroundTruthMask FromEdges(const Graph& graph,
                                   std::vector<EdgeId> edges);
  // Arbitrary combination (used for externally supplied label sets). Both
  // endpoints of every edge are added to the node set.
  static GroundTruthMask FromNodesAndEdges(const Graph& graph,
                                           std::vector<NodeId> nodes,
                                           std::vector<EdgeId> edges);

  std::span<const NodeId> labeled_nodes() const { return nodes_; }
  std::span<const EdgeId> labeled_edges() const { return edges_; }
  std::span<const uint8_t> node_flags() const { return node_flag_; }
  bool node_labeled(NodeId v) const { return node_flag_[v] != 0; }
  bool edge_labeled(EdgeId e) const { return edge_flag_[e] != 0; }
  size_t labeled_dyad_count() const { return 2 * edges_.size(); }

 private:
  std::vector<NodeId> nodes_;
  std::vector<EdgeId> edges_;
  std::vector<uint8_t> node_flag_;
  std::vector<uint8_t> edge_flag_;
};

// Simple random sample without replacement of round(fraction * n) nodes.
absl::StatusOr<GroundTruthMask> RandomNodeSample(const Graph& graph,
                                                 double fraction, Rng& rng);

// Simple random sample without replacement of round(fraction * |E|)
// undirected edges.
absl::StatusOr<GroundTruthMask> RandomEdgeSample(const Graph& graph,
                                                 double fraction, Rng& rng);

// Independent inclusion with p = logistic(alpha + degree*D_i + feature*X_i),
// alpha calibrated so the expected sample size is `target_count`.
absl::StatusOr<GroundTruthMask> BiasedNodeSample(
    const Graph& graph, const NodeTable& nodes, double target_count,
    const BiasedSamplingCoefs& coefs, Rng& rng,
    double* alpha_out = nullptr);

// Per undirected edge: logistic(alpha + degree*(D_i + D_j)
// + feature*(X_i + X_j)).
absl::StatusOr<GroundTruthMask> BiasedEdgeSample(
    const Graph& graph, const NodeTable& nodes, double target_count,
    const BiasedSamplingCoefs& coefs, Rng& rng,
    double* alpha_out = nullptr);

// Finds alpha with sum_u logistic(alpha + score_u) == target_count (to
// within 0.5) by bisection on [-50, 50].
absl::StatusOr<double> CalibrateAlpha(std::span<const double> scores,
                                      double target_count);

// Structural checks for the invariants documented on GroundTruthMask.
absl::Status CheckMask(const Graph& graph, const GroundTruthMask& mask,
                       SampleLevel level);

// `node_id` list.
void WriteMaskNodesCsv(const GroundTruthMask& mask, std::ostream& out);
// `src,dst` list with both orientations of every labeled edge.
void WriteMaskDyadsCsv(const Graph& graph, const GroundTruthMask& mask,
                       std::ostream& out);

}  // namespace homophily

#endif  // HOMOPHILY_SAMPLING_H_
