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

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "homophily/numeric.h"

namespace homophily {
namespace {

int64_t RoundedCount(double fraction, int64_t population) {
  return std::llround(fraction * static_cast<double>(population));
}

absl::Status CheckFraction(double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sampling fraction %g is outside (0, 1)", fraction));
  }
  return absl::OkStatus();
}

absl::Status CheckTarget(double target, size_t units) {
  if (!(target > 0.0) || target >= static_cast<double>(units)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "target count %g must lie in (0, %d)", target, units));
  }
  return absl::OkStatus();
}

}  // namespace

std::string SamplingName(SampleLevel level, SampleMode mode) {
  return absl::StrCat(mode == SampleMode::kRandom ? "random_" : "biased_",
                      SampleLevelName(level));
}

absl::string_view SampleLevelName(SampleLevel level) {
  return level == SampleLevel::kNode ? "node" : "edge";
}

absl::StatusOr<SampleLevel> ParseSampleLevel(absl::string_view name) {
  if (name == "node") return SampleLevel::kNode;
  if (name == "edge") return SampleLevel::kEdge;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown sampling level '%s'", name));
}

GroundTruthMask GroundTruthMask::FromNodes(const Graph& graph,
                                           std::vector<NodeId> nodes) {
  GroundTruthMask mask;
  mask.node_flag_.assign(graph.node_count(), 0);
  mask.edge_flag_.assign(graph.edge_count(), 0);
  for (NodeId v : nodes) mask.node_flag_[v] = 1;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (mask.node_flag_[v]) mask.nodes_.push_back(v);
  }
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    if (mask.node_flag_[ed.u] && mask.node_flag_[ed.v]) {
      mask.edge_flag_[e] = 1;
      mask.edges_.push_back(e);
    }
  }
  return mask;
}

GroundTruthMask GroundTruthMask::FromEdges(const Graph& graph,
                                           std::vector<EdgeId> edges) {
  return FromNodesAndEdges(graph, {}, std::move(edges));
}

GroundTruthMask GroundTruthMask::FromNodesAndEdges(const Graph& graph,
                                                   std::vector<NodeId> nodes,
                                                   std::vector<EdgeId> edges) {
  GroundTruthMask mask;
  mask.node_flag_.assign(graph.node_count(), 0);
  mask.edge_flag_.assign(graph.edge_count(), 0);
  for (NodeId v : nodes) mask.node_flag_[v] = 1;
  for (EdgeId e : edges) {
    mask.edge_flag_[e] = 1;
    mask.node_flag_[graph.edge(e).u] = 1;
    mask.node_flag_[graph.edge(e).v] = 1;
  }
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (mask.node_flag_[v]) mask.nodes_.push_back(v);
  }
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    if (mask.edge_flag_[e]) mask.edges_.push_back(e);
  }
  return mask;
}

absl::StatusOr<GroundTruthMask> RandomNodeSample(const Graph& graph,
                                                 double fraction, Rng& rng) {
  if (absl::Status s = CheckFraction(fraction); !s.ok()) return s;
  const int64_t count = RoundedCount(fraction, graph.node_count());
  if (count == 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "fraction %g of %d nodes rounds to an empty sample", fraction,
        graph.node_count()));
  }
  std::vector<NodeId> all(graph.node_count());
  std::iota(all.begin(), all.end(), 0);
  std::vector<NodeId> picked;
  picked.reserve(count);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), count, rng);
  return GroundTruthMask::FromNodes(graph, std::move(picked));
}

absl::StatusOr<GroundTruthMask> RandomEdgeSample(const Graph& graph,
                                                 double fraction, Rng& rng) {
  if (absl::Status s = CheckFraction(fraction); !s.ok()) return s;
  const int64_t count = RoundedCount(fraction, graph.edge_count());
  if (count == 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "fraction %g of %d edges rounds to an empty sample", fraction,
        graph.edge_count()));
  }
  std::vector<EdgeId> all(graph.edge_count());
  std::iota(all.begin(), all.end(), 0);
  std::vector<EdgeId> picked;
  picked.reserve(count);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), count, rng);
  return GroundTruthMask::FromEdges(graph, std::move(picked));
}

absl::StatusOr<double> CalibrateAlpha(std::span<const double> scores,
                                      double target_count) {
  if (absl::Status s = CheckTarget(target_count, scores.size()); !s.ok()) {
    return s;
  }
  auto expected = [&](double alpha) {
    double sum = 0.0;
    for (double s : scores) sum += Logistic(alpha + s);
    return sum;
  };
  double lo = -50.0;
  double hi = 50.0;
  if (expected(lo) > target_count || expected(hi) < target_count) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "calibration: target %g unreachable with alpha in [-50, 50]",
        target_count));
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (expected(mid) < target_count) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double alpha = 0.5 * (lo + hi);
  if (std::abs(expected(alpha) - target_count) > 0.5) {
    return absl::FailedPreconditionError(
        "calibration: bisection did not reach the target count");
  }
  return alpha;
}

absl::StatusOr<GroundTruthMask> BiasedNodeSample(
    const Graph& graph, const NodeTable& nodes, double target_count,
    const BiasedSamplingCoefs& coefs, Rng& rng, double* alpha_out) {
  std::vector<double> scores(graph.node_count());
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    scores[v] = coefs.degree * graph.degree(v) + coefs.feature * nodes.x[v];
  }
  absl::StatusOr<double> alpha = CalibrateAlpha(scores, target_count);
  if (!alpha.ok()) return alpha.status();
  if (alpha_out != nullptr) *alpha_out = *alpha;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<NodeId> picked;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (unif(rng) < Logistic(*alpha + scores[v])) picked.push_back(v);
  }
  return GroundTruthMask::FromNodes(graph, std::move(picked));
}

absl::StatusOr<GroundTruthMask> BiasedEdgeSample(
    const Graph& graph, const NodeTable& nodes, double target_count,
    const BiasedSamplingCoefs& coefs, Rng& rng, double* alpha_out) {
  std::vector<double> scores(graph.edge_count());
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    scores[e] = coefs.degree * (graph.degree(ed.u) + graph.degree(ed.v)) +
                coefs.feature * (nodes.x[ed.u] + nodes.x[ed.v]);
  }
  absl::StatusOr<double> alpha = CalibrateAlpha(scores, target_count);
  if (!alpha.ok()) return alpha.status();
  if (alpha_out != nullptr) *alpha_out = *alpha;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<EdgeId> picked;
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    if (unif(rng) < Logistic(*alpha + scores[e])) picked.push_back(e);
  }
  return GroundTruthMask::FromEdges(graph, std::move(picked));
}

absl::Status CheckMask(const Graph& graph, const GroundTruthMask& mask,
                       SampleLevel level) {
  for (EdgeId e : mask.labeled_edges()) {
    const Edge& ed = graph.edge(e);
    if (!mask.node_labeled(ed.u) || !mask.node_labeled(ed.v)) {
      return absl::InternalError(absl::StrFormat(
          "labeled edge %d has an unlabeled endpoint", e));
    }
  }
  if (level == SampleLevel::kNode) {
    for (EdgeId e = 0; e < graph.edge_count(); ++e) {
      const Edge& ed = graph.edge(e);
      const bool both = mask.node_labeled(ed.u) && mask.node_labeled(ed.v);
      if (both != mask.edge_labeled(e)) {
        return absl::InternalError(absl::StrFormat(
            "edge %d labeled=%d but endpoints labeled=%d", e,
            mask.edge_labeled(e), both));
      }
    }
  }
  return absl::OkStatus();
}

void WriteMaskNodesCsv(const GroundTruthMask& mask, std::ostream& out) {
  out << "node_id\n";
  for (NodeId v : mask.labeled_nodes()) out << v << '\n';
}

void WriteMaskDyadsCsv(const Graph& graph, const GroundTruthMask& mask,
                       std::ostream& out) {
  out << "src,dst\n";
  for (EdgeId e : mask.labeled_edges()) {
    const Edge& ed = graph.edge(e);
    out << ed.u << ',' << ed.v << '\n' << ed.v << ',' << ed.u << '\n';
  }
}

}  // namespace homophily
