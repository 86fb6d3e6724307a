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

#include "homophily/simgen.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "boost/math/distributions/normal.hpp"
#include "homophily/numeric.h"

namespace homophily {

absl::string_view DgpName(Dgp dgp) {
  switch (dgp) {
    case Dgp::kIndependent:
      return "independent";
    case Dgp::kDegree:
      return "degree";
    case Dgp::kMain:
      return "main";
    case Dgp::kUnobserved:
      return "unobserved";
    case Dgp::kSampled:
      return "sampled";
  }
  return "unknown";
}

absl::StatusOr<Dgp> ParseDgp(absl::string_view name) {
  for (Dgp d : kAllDgps) {
    if (DgpName(d) == name) return d;
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown data-generating process '%s'", name));
}

absl::string_view ZTransformName(ZTransform t) {
  return t == ZTransform::kZScore ? "zscore" : "quantile_normal";
}

absl::StatusOr<ZTransform> ParseZTransform(absl::string_view name) {
  if (name == "zscore") return ZTransform::kZScore;
  if (name == "quantile_normal") return ZTransform::kQuantileNormal;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown z_transform '%s'", name));
}

absl::StatusOr<std::vector<double>> Standardize(std::span<const double> v) {
  if (v.size() < 2) {
    return absl::FailedPreconditionError(
        "standardize needs at least two values");
  }
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / n);
  if (!(sd > 0.0) || sd < 1e-300) {
    return absl::FailedPreconditionError(
        "standardize: input has zero variance");
  }
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) / sd;
  return out;
}

absl::StatusOr<std::vector<double>> QuantileNormalize(
    std::span<const double> v) {
  if (v.size() < 2) {
    return absl::FailedPreconditionError(
        "quantile normalization needs at least two values");
  }
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; })) {
    return absl::FailedPreconditionError(
        "quantile normalization: input is constant");
  }
  const size_t n = v.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return v[a] < v[b]; });
  boost::math::normal_distribution<double> std_normal;
  std::vector<double> out(n);
  for (size_t lo = 0; lo < n;) {
    size_t hi = lo;
    while (hi + 1 < n && v[order[hi + 1]] == v[order[lo]]) ++hi;
    // 1-based average rank of the tie block.
    const double rank = 0.5 * static_cast<double>(lo + hi) + 1.0;
    const double q = boost::math::quantile(
        std_normal, (rank - 0.5) / static_cast<double>(n));
    for (size_t k = lo; k <= hi; ++k) out[order[k]] = q;
    lo = hi + 1;
  }
  return out;
}

absl::StatusOr<std::vector<double>> RawNetworkFeature(
    const Graph& graph, Dgp dgp, std::span<const double> source) {
  const int32_t n = graph.node_count();
  if (source.size() != static_cast<size_t>(n)) {
    return absl::InvalidArgumentError("one source value per node is required");
  }
  std::vector<double> raw(n, 0.0);
  if (dgp == Dgp::kIndependent) return raw;
  for (NodeId v = 0; v < n; ++v) {
    auto nbrs = graph.neighbors(v);
    if (nbrs.empty()) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "node %d has no neighbors; the network feature is undefined", v));
    }
    if (dgp == Dgp::kDegree) {
      double sum = 0.0;
      for (NodeId j : nbrs) sum += source[j];
      raw[v] = sum / static_cast<double>(nbrs.size());
    } else {
      double best = source[nbrs[0]];
      for (NodeId j : nbrs) best = std::max(best, source[j]);
      raw[v] = best;
    }
  }
  return raw;
}

absl::StatusOr<NodeTable> GenerateFeatures(const Graph& graph, Dgp dgp,
                                           const OutcomeParams& params,
                                           Rng& rng) {
  const int32_t n = graph.node_count();
  NodeTable t;
  t.x.resize(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& x : t.x) x = normal(rng);

  if (dgp == Dgp::kIndependent) {
    t.z.assign(n, 0.0);
    return t;
  }

  std::span<const double> source = t.x;
  if (dgp == Dgp::kUnobserved) {
    t.z_latent.resize(n);
    for (double& z : t.z_latent) z = normal(rng);
    source = t.z_latent;
  }

  absl::StatusOr<std::vector<double>> raw =
      RawNetworkFeature(graph, dgp, source);
  if (!raw.ok()) return raw.status();

  absl::StatusOr<std::vector<double>> z =
      params.z_transform == ZTransform::kZScore ? Standardize(*raw)
                                                : QuantileNormalize(*raw);
  if (!z.ok()) return z.status();
  t.z = *std::move(z);
  return t;
}

void GenerateOutcomes(NodeTable& table, Dgp dgp, const OutcomeParams& params,
                      Rng& rng) {
  const size_t n = table.size();
  table.p.resize(n);
  table.y.resize(n);
  const double z_coef = dgp == Dgp::kIndependent ? 0.0 : params.z_coef;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (size_t i = 0; i < n; ++i) {
    table.p[i] = Logistic(params.x_coef * table.x[i] + z_coef * table.z[i]);
    table.y[i] = unif(rng) < table.p[i] ? 1 : 0;
  }
}

void WriteNodeTableCsv(const NodeTable& table,
                       std::span<const uint8_t> ground_truth,
                       std::ostream& out) {
  out << "node_id,x,z,p,y,is_ground_truth\n";
  for (size_t i = 0; i < table.size(); ++i) {
    const int gt = ground_truth.empty() ? 0 : ground_truth[i];
    out << absl::StrFormat("%d,%.17g,%.17g,%.17g,%d,%d\n", i, table.x[i],
                           table.z.empty() ? 0.0 : table.z[i],
                           table.p.empty() ? 0.0 : table.p[i],
                           table.y.empty() ? 0 : table.y[i], gt);
  }
}

}  // namespace homophily
