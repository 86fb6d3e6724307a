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

#ifndef HOMOPHILY_METRICS_H_
#define HOMOPHILY_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "homophily/estimators.h"
#include "homophily/rng.h"

namespace homophily {

struct BiasMae {
  double bias = 0.0;  // mean of (H_hat - H) / H
  double mae = 0.0;   // mean of |H_hat - H| / H
};

absl::StatusOr<BiasMae> BiasAndMae(std::span<const EstimateRecord> records);

// Probability that a random positive outranks a random negative, ties
// counted as one half. Computed from midranks in O(n log n).
absl::StatusOr<double> Auc(std::span<const double> scores,
                           std::span<const uint8_t> labels);

struct NodeMetrics {
  double auc = 0.0;
  double accuracy = 0.0;  // predicted a when probability >= 0.5
};

absl::StatusOr<NodeMetrics> NodeLevelMetrics(std::span<const double> probs,
                                             std::span<const uint8_t> labels);

// One cell of the battery summary.
struct SummaryCell {
  std::string sampling;
  std::string dgp;
  ModelKind model = ModelKind::kNoModel;
  DenominatorMode denominator_mode = DenominatorMode::kOracle;
  size_t replications = 0;
  size_t excluded = 0;
  double bias = 0.0;
  double mae = 0.0;
  std::optional<double> mean_auc;
  std::optional<double> mean_accuracy;
  double flagged_fraction = 0.0;
};

// Aggregates per (sampling, dgp, model, denominator mode). A replication
// with a hard failure in any model of its (sampling, dgp, mode) group is
// dropped from every cell of that group, keeping the comparison paired.
std::vector<SummaryCell> Summarize(std::span<const EstimateRecord> records);

// Canonical row order: edge-level rows before node-level rows, then by data
// generating process.
bool SummaryRowLess(absl::string_view sampling_a, absl::string_view dgp_a,
                    absl::string_view sampling_b, absl::string_view dgp_b);

enum class TableMetric { kBias, kMae };

// Wide table for one denominator mode: rows sampling x dgp, one column per
// model. The best cell of each row (smallest |bias| or smallest error) is
// suffixed with '*'.
void WriteSummaryTableCsv(std::span<const SummaryCell> summary,
                          TableMetric metric, DenominatorMode mode,
                          std::ostream& out);

void WriteSummaryCsv(std::span<const SummaryCell> summary, std::ostream& out);

// Node-producing models only: mean AUC and accuracy against bias.
void WriteAucVsBiasCsv(std::span<const SummaryCell> summary,
                       std::ostream& out);

// Models whose metric ties the row optimum (within 1e-12).
std::vector<ModelKind> BestModels(std::span<const SummaryCell> row,
                                  TableMetric metric);

struct DiagnosticOptions {
  int folds = 5;
  int permutations = 200;
  double level = 0.95;
};

struct DiagnosticResult {
  std::vector<double> fold_sums;  // sum of e_ij / D_i over held-out dyads
  std::vector<size_t> fold_sizes;
  double total = 0.0;
  double null_low = 0.0;
  double null_high = 0.0;
  bool flagged = false;  // total outside [null_low, null_high]
  size_t dyads = 0;
  // Fold of each frame row; -1 for dyads outside the ground truth.
  std::vector<int> fold_of_row;
};

// K-fold cross-validation over ground-truth dyads. Folds are formed from
// undirected edges so both orientations share a fold. Each fold is scored
// by the strategy refit on the remaining folds; the weighted residual sum
// is compared with a null built by re-pairing the out-of-fold residuals with
// random ground-truth dyads.
absl::StatusOr<DiagnosticResult> CvResidualDiagnostic(
    ModelKind kind, const EstimationInput& input, const DyadFrame& frame,
    const DiagnosticOptions& options, Rng& rng);

}  // namespace homophily

#endif  // HOMOPHILY_METRICS_H_
