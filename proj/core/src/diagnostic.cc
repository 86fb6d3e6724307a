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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "homophily/metrics.h"
#include "homophily/status_macros.h"

namespace homophily {
namespace {

// Linear interpolation between order statistics of sorted `v`.
double Quantile(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

}  // namespace

absl::StatusOr<DiagnosticResult> CvResidualDiagnostic(
    ModelKind kind, const EstimationInput& input, const DyadFrame& frame,
    const DiagnosticOptions& options, Rng& rng) {
  if (kind == ModelKind::kNoModel) {
    return absl::InvalidArgumentError(
        "no_model makes no predictions to cross-validate");
  }
  if (options.folds < 2) {
    return absl::InvalidArgumentError("at least two folds are required");
  }
  if (options.permutations < 1 || !(options.level > 0.0 && options.level < 1.0)) {
    return absl::InvalidArgumentError("invalid permutation settings");
  }
  const GroundTruthMask& mask = *input.mask;
  std::vector<EdgeId> edges(mask.labeled_edges().begin(),
                            mask.labeled_edges().end());
  if (edges.size() < static_cast<size_t>(options.folds)) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "%d labeled edges cannot fill %d folds", edges.size(), options.folds));
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  std::vector<int> fold_of_edge(input.graph->edge_count(), -1);
  for (size_t k = 0; k < edges.size(); ++k) {
    fold_of_edge[edges[k]] = static_cast<int>(k % options.folds);
  }

  DiagnosticResult out;
  out.fold_sums.assign(options.folds, 0.0);
  out.fold_sizes.assign(options.folds, 0);
  out.fold_of_row.assign(frame.size(), -1);
  for (size_t r = 0; r < frame.size(); ++r) {
    if (frame.dyad_labeled[r]) out.fold_of_row[r] = fold_of_edge[frame.edge[r]];
  }

  std::vector<double> residual(frame.size(), 0.0);
  std::vector<uint8_t> allow(frame.size(), 0);
  for (int k = 0; k < options.folds; ++k) {
    for (size_t r = 0; r < frame.size(); ++r) {
      allow[r] = out.fold_of_row[r] >= 0 && out.fold_of_row[r] != k;
    }
    absl::StatusOr<StrategyFit> fit = FitStrategy(kind, input, frame, allow);
    if (!fit.ok()) {
      return absl::Status(fit.status().code(),
                          absl::StrFormat("fold %d: %s", k,
                                          fit.status().message()));
    }
    if (fit->fallback) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "fold %d: training labels contain a single class", k));
    }
    for (size_t r = 0; r < frame.size(); ++r) {
      if (out.fold_of_row[r] != k) continue;
      residual[r] = frame.y_aa[r] - fit->dyad_aa[r];
      out.fold_sums[k] += frame.weight[r] * residual[r];
      ++out.fold_sizes[k];
    }
  }
  out.total = std::accumulate(out.fold_sums.begin(), out.fold_sums.end(), 0.0);

  std::vector<size_t> rows;
  for (size_t r = 0; r < frame.size(); ++r) {
    if (out.fold_of_row[r] >= 0) rows.push_back(r);
  }
  out.dyads = rows.size();
  std::vector<double> e(rows.size());
  std::vector<double> w(rows.size());
  for (size_t k = 0; k < rows.size(); ++k) {
    e[k] = residual[rows[k]];
    w[k] = frame.weight[rows[k]];
  }
  std::vector<double> null(options.permutations);
  for (int p = 0; p < options.permutations; ++p) {
    std::shuffle(e.begin(), e.end(), rng);
    double s = 0.0;
    for (size_t k = 0; k < e.size(); ++k) s += w[k] * e[k];
    null[p] = s;
  }
  std::sort(null.begin(), null.end());
  const double tail = 0.5 * (1.0 - options.level);
  out.null_low = Quantile(null, tail);
  out.null_high = Quantile(null, 1.0 - tail);
  out.flagged = out.total < out.null_low || out.total > out.null_high;
  return out;
}

}  // namespace homophily
