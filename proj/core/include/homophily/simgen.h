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

#ifndef HOMOPHILY_SIMGEN_H_
#define HOMOPHILY_SIMGEN_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "homophily/graph.h"
#include "homophily/rng.h"

namespace homophily {

// Data-generating processes for node outcomes. kSampled draws outcomes
// exactly like kMain; it differs only in how ground truth is sampled.
enum class Dgp { kIndependent, kDegree, kMain, kUnobserved, kSampled };

inline constexpr Dgp kAllDgps[] = {Dgp::kIndependent, Dgp::kDegree,
                                   Dgp::kUnobserved, Dgp::kMain,
                                   Dgp::kSampled};

absl::string_view DgpName(Dgp dgp);
absl::StatusOr<Dgp> ParseDgp(absl::string_view name);

enum class ZTransform { kZScore, kQuantileNormal };

absl::string_view ZTransformName(ZTransform t);
absl::StatusOr<ZTransform> ParseZTransform(absl::string_view name);

struct OutcomeParams {
  double x_coef = 2.0;
  double z_coef = 1.0;
  ZTransform z_transform = ZTransform::kZScore;
};

// Per-node simulation state. `y` is 1 for group a, 0 for group b.
struct NodeTable {
  std::vector<double> x;
  std::vector<double> z;
  std::vector<double> z_latent;  // only filled for Dgp::kUnobserved
  std::vector<double> p;
  std::vector<uint8_t> y;

  size_t size() const { return x.size(); }
};

// z-score with the population (1/n) standard deviation.
absl::StatusOr<std::vector<double>> Standardize(std::span<const double> v);

// Rank-based inverse-normal transform, Phi^-1((rank - 0.5) / n), with
// average ranks for ties.
absl::StatusOr<std::vector<double>> QuantileNormalize(
    std::span<const double> v);

// Unstandardized network feature: max (or, for kDegree, mean) of `source`
// over each node's neighbors. All zeros for kIndependent.
absl::StatusOr<std::vector<double>> RawNetworkFeature(
    const Graph& graph, Dgp dgp, std::span<const double> source);

// Draws X ~ N(0, 1) for every node and the network feature Z for `dgp`:
//   kIndependent          Z = 0 (unused)
//   kMain, kSampled       Z = max over neighbors of X
//   kDegree               Z = mean over neighbors of X
//   kUnobserved           Z = max over neighbors of an independent latent
// followed by the configured standardization (skipped for kIndependent).
absl::StatusOr<NodeTable> GenerateFeatures(const Graph& graph, Dgp dgp,
                                           const OutcomeParams& params,
                                           Rng& rng);

// p = logistic(x_coef * X + z_coef * Z) (Z dropped for kIndependent),
// Y ~ Bernoulli(p).
void GenerateOutcomes(NodeTable& table, Dgp dgp, const OutcomeParams& params,
                      Rng& rng);

// `node_id,x,z,p,y,is_ground_truth`. `ground_truth` may be empty.
void WriteNodeTableCsv(const NodeTable& table,
                       std::span<const uint8_t> ground_truth,
                       std::ostream& out);

}  // namespace homophily

#endif  // HOMOPHILY_SIMGEN_H_
