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

#ifndef HOMOPHILY_ESTIMATORS_H_
#define HOMOPHILY_ESTIMATORS_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "homophily/glm.h"
#include "homophily/graph.h"
#include "homophily/sampling.h"
#include "homophily/simgen.h"

namespace homophily {

enum class ModelKind {
  kNoModel,
  kNodeNoNetwork,
  kNode,
  kDyad,
  kEgoAlter,
  kEgoAlterAugmented,
};

inline constexpr ModelKind kAllModelKinds[] = {
    ModelKind::kNoModel,  ModelKind::kNodeNoNetwork, ModelKind::kNode,
    ModelKind::kDyad,     ModelKind::kEgoAlter,
    ModelKind::kEgoAlterAugmented};

absl::string_view ModelKindName(ModelKind kind);
absl::StatusOr<ModelKind> ParseModelKind(absl::string_view name);

// True for kinds that yield one category probability per node.
bool ProducesNodePredictions(ModelKind kind);

enum class DenominatorMode { kOracle, kPlugIn };

absl::string_view DenominatorModeName(DenominatorMode mode);
absl::StatusOr<DenominatorMode> ParseDenominatorMode(absl::string_view name);

struct FeatureOptions {
  // Real data may come without a node feature; X columns are then dropped.
  bool use_x = true;
  // Degree terms (1/D_i or A_j/D_i, D_i, D_j). Dropping them reduces every
  // strategy to its no-network form.
  bool use_network = true;
};

struct EstimationInput {
  const Graph* graph = nullptr;
  const NodeTable* nodes = nullptr;  // x always; y on labeled nodes at least
  const GroundTruthMask* mask = nullptr;
  // Per-node action A_j. Empty means A_j = 1 for every node.
  std::span<const double> actions;
  FeatureOptions features;
  FitOptions fit;
};

// One row per directed dyad, in Graph slot order (ego, then alter).
struct DyadFrame {
  std::vector<NodeId> ego;
  std::vector<NodeId> alter;
  std::vector<EdgeId> edge;
  std::vector<double> weight;      // A_alter / D_ego
  std::vector<double> inv_degree;  // 1 / D_ego
  std::vector<double> d_ego;
  std::vector<double> d_alter;
  std::vector<double> x_ego;
  std::vector<double> x_alter;
  std::vector<uint8_t> y_ego;
  std::vector<uint8_t> y_alter;
  std::vector<uint8_t> y_aa;
  std::vector<uint8_t> ego_labeled;
  std::vector<uint8_t> alter_labeled;
  std::vector<uint8_t> dyad_labeled;

  size_t size() const { return ego.size(); }
};

absl::StatusOr<DyadFrame> BuildDyadFrame(const EstimationInput& input);

// What a design is fit to predict.
enum class DesignTarget {
  kNode,            // Y_i on node rows
  kDyad,            // Y_ij^aa on dyad rows
  kEgo,             // Y_i on dyad rows
  kAlter,           // Y_j on dyad rows
  kAlterAugmented,  // Y_j with the ego prediction as an extra feature
  kEgoMargin,       // Y_i on the dyad model's rows (plug-in denominator)
};

struct Design {
  DesignMatrix matrix;                // every scoring row
  std::vector<size_t> training_rows;  // rows whose target is observed
  std::vector<uint8_t> targets;       // per row; valid on training rows
};

// Builds the scoring design for `target` together with the rows a model may
// be trained on. Columns, intercept first:
//   node, no network:   x
//   node:               x, 1/D_i, D_i
//   dyad-level targets: x_i, x_j, A_j/D_i, D_i, D_j [, ego prediction]
// `dyad_allow`, when nonempty, restricts training to the flagged dyads (and,
// for node targets, to their egos).
absl::StatusOr<Design> BuildDesign(ModelKind kind, DesignTarget target,
                                   const EstimationInput& input,
                                   const DyadFrame& frame,
                                   std::span<const double> ego_predictions = {},
                                   std::span<const uint8_t> dyad_allow = {});

// Fitted strategy: per-dyad predictions and everything needed for either
// denominator.
struct StrategyFit {
  ModelKind kind = ModelKind::kNoModel;
  std::vector<double> dyad_aa;     // E[Y_ij^aa | X_ij] per dyad
  std::vector<double> ego_pred;    // E[Y_i | .] per dyad
  std::vector<double> alter_pred;  // E[Y_j | .] per dyad (product kinds)
  std::vector<double> node_prob;   // per node (node-producing kinds)
  double numerator = 0.0;
  double plugin_denominator = 0.0;
  std::vector<FittedModel> models;
  bool ridge = false;
  bool fallback = false;

  std::string Flag() const;
};

absl::StatusOr<StrategyFit> FitStrategy(ModelKind kind,
                                        const EstimationInput& input,
                                        const DyadFrame& frame,
                                        std::span<const uint8_t> dyad_allow = {});

struct EstimateRecord {
  int rep = 0;
  std::string dgp;
  std::string sampling;
  ModelKind model = ModelKind::kNoModel;
  DenominatorMode denominator_mode = DenominatorMode::kOracle;
  double h_true = std::numeric_limits<double>::quiet_NaN();
  double h_hat = std::numeric_limits<double>::quiet_NaN();
  double relative_error = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> r1;
  std::optional<double> r2;
  std::optional<double> node_auc;
  std::optional<double> node_accuracy;
  size_t n_labeled_nodes = 0;
  size_t n_labeled_dyads = 0;
  std::string flag = "ok";

  bool failed() const { return flag.rfind("error", 0) == 0; }
};

// Quantities that need every node's true label.
struct OracleTruth {
  double group_size = 0.0;  // T[Y^a]
  double h_true = 0.0;
};

// Average egonet composition from complete labels. Computed both as a sum
// over egos and as a sum over dyads; the two must agree to 1e-12.
// `actions` (may be empty) weights alter j by A_j.
absl::StatusOr<double> TrueHomophily(const Graph& graph,
                                     std::span<const uint8_t> y,
                                     std::span<const double> actions = {});

absl::StatusOr<OracleTruth> ComputeOracle(const EstimationInput& input);

// Turns a fitted strategy into an estimate. `oracle` is required for the
// oracle denominator and for the bias decomposition.
absl::StatusOr<EstimateRecord> MakeRecord(const StrategyFit& fit,
                                          DenominatorMode mode,
                                          const EstimationInput& input,
                                          const DyadFrame& frame,
                                          const std::optional<OracleTruth>& oracle);

// Convenience wrapper: build the frame, fit, and summarize. Uses the oracle
// when `complete_labels` is set.
absl::StatusOr<EstimateRecord> EstimateHomophily(ModelKind kind,
                                                 const EstimationInput& input,
                                                 DenominatorMode mode,
                                                 bool complete_labels);

// Action-weighted variant: A_j/D_i replaces 1/D_i both as dyad weight and
// as the dyad-level model feature.
absl::StatusOr<EstimateRecord> ExtendedHomophily(ModelKind kind,
                                                 const EstimationInput& input,
                                                 std::span<const double> actions,
                                                 DenominatorMode mode,
                                                 bool complete_labels);

struct BiasTerms {
  double r1 = 0.0;
  double r2 = 0.0;
};

// With e_i = Y_i - ego_pred and e_j = Y_j - alter_pred:
//   R1 = T^-1 sum w e_i Y_j,   R2 = T^-1 sum w ego_pred e_j,
// so that T^-1 sum w ego_pred alter_pred = H - R1 - R2.
absl::StatusOr<BiasTerms> BiasDecomposition(const DyadFrame& frame,
                                            std::span<const double> ego_pred,
                                            std::span<const double> alter_pred,
                                            double group_size);

struct ColemanResult {
  double numerator = 0.0;     // T^-1 sum over dyads of Y_i Y_j
  double proportion = 0.0;    // within-group share of group-a dyad slots
  double chance_share = 0.0;  // group a's share of all dyad slots
  double index = 0.0;
  // Same index against group a's share of nodes. Only filled by Coleman().
  double node_share = 0.0;
  double node_share_index = 0.0;
};

// (s - w) / (1 - w) when s >= w, else (s - w) / w.
double ColemanIndex(double proportion, double share);

// `values` are 0/1 labels or probabilities, one per node.
absl::StatusOr<ColemanResult> Coleman(const Graph& graph,
                                      std::span<const double> values);

// Same quantities from per-dyad probabilities: `aa` for both endpoints in
// group a, `ego` for the ego alone.
absl::StatusOr<ColemanResult> ColemanFromDyads(std::span<const double> aa,
                                               std::span<const double> ego,
                                               double group_size);

}  // namespace homophily

#endif  // HOMOPHILY_ESTIMATORS_H_
