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

#include "homophily/estimators.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "homophily/numeric.h"
#include "homophily/status_macros.h"

namespace homophily {
namespace {

bool IsNodeKind(ModelKind kind) {
  return kind == ModelKind::kNodeNoNetwork || kind == ModelKind::kNode;
}

bool IsProductKind(ModelKind kind) {
  return IsNodeKind(kind) || kind == ModelKind::kEgoAlter ||
         kind == ModelKind::kEgoAlterAugmented;
}

bool Allowed(std::span<const uint8_t> allow, size_t r) {
  return allow.empty() || allow[r] != 0;
}

struct Scored {
  FittedModel model;
  std::vector<double> predictions;
  bool fallback = false;
};

// Fits on the design's training rows and scores every row. A single-class
// training set yields a constant model at the observed rate.
absl::StatusOr<Scored> FitAndScore(const Design& design,
                                   const FitOptions& options) {
  if (design.training_rows.empty()) {
    return absl::FailedPreconditionError("empty training set");
  }
  DesignMatrix train = design.matrix.Subset(design.training_rows);
  std::vector<uint8_t> labels;
  labels.reserve(design.training_rows.size());
  for (size_t r : design.training_rows) labels.push_back(design.targets[r]);

  Scored out;
  const size_t positives = std::count(labels.begin(), labels.end(), 1);
  if (positives == 0 || positives == labels.size()) {
    const double rate = static_cast<double>(positives) / labels.size();
    out.model.col_names.assign(design.matrix.col_names().begin(),
                               design.matrix.col_names().end());
    out.model.beta.assign(design.matrix.cols(), 0.0);
    out.model.beta[0] = Logit(std::clamp(rate, 1e-12, 1.0 - 1e-12));
    out.model.converged = true;
    out.fallback = true;
  } else {
    ASSIGN_OR_RETURN(out.model, FitLogistic(train, labels, options));
  }
  ASSIGN_OR_RETURN(out.predictions, Predict(out.model, design.matrix));
  return out;
}

}  // namespace

absl::string_view ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kNoModel:
      return "no_model";
    case ModelKind::kNodeNoNetwork:
      return "node_no_network";
    case ModelKind::kNode:
      return "node";
    case ModelKind::kDyad:
      return "dyad";
    case ModelKind::kEgoAlter:
      return "ego_alter";
    case ModelKind::kEgoAlterAugmented:
      return "ego_alter_augmented";
  }
  return "unknown";
}

absl::StatusOr<ModelKind> ParseModelKind(absl::string_view name) {
  for (ModelKind k : kAllModelKinds) {
    if (ModelKindName(k) == name) return k;
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown model kind '%s'", name));
}

bool ProducesNodePredictions(ModelKind kind) {
  return IsProductKind(kind);
}

absl::string_view DenominatorModeName(DenominatorMode mode) {
  return mode == DenominatorMode::kOracle ? "oracle" : "plugin";
}

absl::StatusOr<DenominatorMode> ParseDenominatorMode(absl::string_view name) {
  if (name == "oracle") return DenominatorMode::kOracle;
  if (name == "plugin") return DenominatorMode::kPlugIn;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown denominator mode '%s'", name));
}

std::string StrategyFit::Flag() const {
  std::vector<std::string> parts;
  if (ridge) parts.push_back("ridge");
  if (fallback) parts.push_back("fallback");
  return parts.empty() ? "ok" : absl::StrJoin(parts, "|");
}

absl::StatusOr<DyadFrame> BuildDyadFrame(const EstimationInput& input) {
  if (input.graph == nullptr || input.nodes == nullptr ||
      input.mask == nullptr) {
    return absl::InvalidArgumentError("estimation input is incomplete");
  }
  const Graph& g = *input.graph;
  const NodeTable& nt = *input.nodes;
  const GroundTruthMask& mask = *input.mask;
  const size_t n = static_cast<size_t>(g.node_count());
  if (nt.x.size() != n || nt.y.size() != n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "node table has %d rows but the graph has %d nodes", nt.x.size(), n));
  }
  if (mask.node_flags().size() != n) {
    return absl::InvalidArgumentError("mask does not match the graph");
  }
  if (!input.actions.empty()) {
    if (input.actions.size() != n) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%d actions given for %d nodes", input.actions.size(), n));
    }
    for (double a : input.actions) {
      if (!(a >= 0.0) || !std::isfinite(a)) {
        return absl::InvalidArgumentError(
            "actions must be finite and nonnegative");
      }
    }
  }

  DyadFrame f;
  const size_t rows = static_cast<size_t>(g.dyad_count());
  f.ego.resize(rows);
  f.alter.resize(rows);
  f.edge.resize(rows);
  f.weight.resize(rows);
  f.inv_degree.resize(rows);
  f.d_ego.resize(rows);
  f.d_alter.resize(rows);
  f.x_ego.resize(rows);
  f.x_alter.resize(rows);
  f.y_ego.resize(rows);
  f.y_alter.resize(rows);
  f.y_aa.resize(rows);
  f.ego_labeled.resize(rows);
  f.alter_labeled.resize(rows);
  f.dyad_labeled.resize(rows);
  for (size_t r = 0; r < rows; ++r) {
    const NodeId i = g.slot_ego(r);
    const NodeId j = g.slot_alter(r);
    const double di = g.degree(i);
    f.ego[r] = i;
    f.alter[r] = j;
    f.edge[r] = g.slot_edge(r);
    f.inv_degree[r] = 1.0 / di;
    f.weight[r] = input.actions.empty() ? 1.0 / di : input.actions[j] / di;
    f.d_ego[r] = di;
    f.d_alter[r] = g.degree(j);
    f.x_ego[r] = nt.x[i];
    f.x_alter[r] = nt.x[j];
    f.y_ego[r] = nt.y[i];
    f.y_alter[r] = nt.y[j];
    f.y_aa[r] = nt.y[i] && nt.y[j] ? 1 : 0;
    f.ego_labeled[r] = mask.node_labeled(i);
    f.alter_labeled[r] = mask.node_labeled(j);
    f.dyad_labeled[r] = mask.edge_labeled(f.edge[r]);
  }
  return f;
}

absl::StatusOr<Design> BuildDesign(ModelKind kind, DesignTarget target,
                                   const EstimationInput& input,
                                   const DyadFrame& frame,
                                   std::span<const double> ego_predictions,
                                   std::span<const uint8_t> dyad_allow) {
  const bool use_x = input.features.use_x;
  const bool use_network = input.features.use_network;
  Design d;
  if (target == DesignTarget::kNode) {
    if (!IsNodeKind(kind)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "model kind %s has no node-level design", ModelKindName(kind)));
    }
    const bool network = kind == ModelKind::kNode && use_network;
    std::vector<std::string> names = {"intercept"};
    if (use_x) names.push_back("x");
    if (network) {
      names.push_back("inv_degree");
      names.push_back("degree");
    }
    const Graph& g = *input.graph;
    const NodeTable& nt = *input.nodes;
    d.matrix = DesignMatrix(std::move(names));
    d.matrix.Reserve(g.node_count());
    std::vector<double> row;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      row.clear();
      row.push_back(1.0);
      if (use_x) row.push_back(nt.x[v]);
      if (network) {
        row.push_back(1.0 / g.degree(v));
        row.push_back(g.degree(v));
      }
      d.matrix.AddRow(row, {v, -1});
    }
    d.targets.assign(nt.y.begin(), nt.y.end());
    if (dyad_allow.empty()) {
      const auto labeled = input.mask->labeled_nodes();
      d.training_rows.assign(labeled.begin(), labeled.end());
    } else {
      std::vector<uint8_t> seen(g.node_count(), 0);
      for (size_t r = 0; r < frame.size(); ++r) {
        if (dyad_allow[r] && frame.ego_labeled[r]) seen[frame.ego[r]] = 1;
      }
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (seen[v]) d.training_rows.push_back(v);
      }
    }
    return d;
  }

  if (kind != ModelKind::kDyad && kind != ModelKind::kEgoAlter &&
      kind != ModelKind::kEgoAlterAugmented) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "model kind %s has no dyad-level design", ModelKindName(kind)));
  }
  const bool augmented = target == DesignTarget::kAlterAugmented;
  if (augmented && ego_predictions.size() != frame.size()) {
    return absl::InvalidArgumentError(
        "augmented alter design needs one ego prediction per dyad");
  }
  std::vector<std::string> names = {"intercept"};
  if (use_x) {
    names.push_back("x_ego");
    names.push_back("x_alter");
  }
  if (use_network) {
    names.push_back(input.actions.empty() ? "inv_degree_ego"
                                          : "action_over_degree_ego");
    names.push_back("degree_ego");
    names.push_back("degree_alter");
  }
  if (augmented) names.push_back("ego_prediction");
  d.matrix = DesignMatrix(std::move(names));
  d.matrix.Reserve(frame.size());
  std::vector<double> row;
  for (size_t r = 0; r < frame.size(); ++r) {
    row.clear();
    row.push_back(1.0);
    if (use_x) {
      row.push_back(frame.x_ego[r]);
      row.push_back(frame.x_alter[r]);
    }
    if (use_network) {
      row.push_back(frame.weight[r]);
      row.push_back(frame.d_ego[r]);
      row.push_back(frame.d_alter[r]);
    }
    if (augmented) row.push_back(ego_predictions[r]);
    d.matrix.AddRow(row, {frame.ego[r], frame.alter[r]});
  }

  std::span<const uint8_t> targets;
  std::span<const uint8_t> trainable;
  switch (target) {
    case DesignTarget::kDyad:
      targets = frame.y_aa;
      trainable = frame.dyad_labeled;
      break;
    case DesignTarget::kEgoMargin:
      targets = frame.y_ego;
      trainable = frame.dyad_labeled;
      break;
    case DesignTarget::kEgo:
      targets = frame.y_ego;
      trainable = frame.ego_labeled;
      break;
    case DesignTarget::kAlter:
    case DesignTarget::kAlterAugmented:
      targets = frame.y_alter;
      trainable = frame.alter_labeled;
      break;
    case DesignTarget::kNode:
      break;
  }
  d.targets.assign(targets.begin(), targets.end());
  for (size_t r = 0; r < frame.size(); ++r) {
    if (trainable[r] && Allowed(dyad_allow, r)) d.training_rows.push_back(r);
  }
  return d;
}

absl::StatusOr<StrategyFit> FitStrategy(ModelKind kind,
                                        const EstimationInput& input,
                                        const DyadFrame& frame,
                                        std::span<const uint8_t> dyad_allow) {
  StrategyFit fit;
  fit.kind = kind;
  const size_t rows = frame.size();

  if (kind == ModelKind::kNoModel) {
    // Ratio over fully observed dyads.
    for (size_t r = 0; r < rows; ++r) {
      if (!frame.dyad_labeled[r] || !Allowed(dyad_allow, r)) continue;
      fit.numerator += frame.weight[r] * frame.y_aa[r];
      fit.plugin_denominator += frame.inv_degree[r] * frame.y_ego[r];
    }
    return fit;
  }

  auto absorb = [&fit](Scored& s) {
    fit.ridge = fit.ridge || s.model.ridge_used;
    fit.fallback = fit.fallback || s.fallback;
    fit.models.push_back(std::move(s.model));
  };

  if (IsNodeKind(kind)) {
    ASSIGN_OR_RETURN(Design design, BuildDesign(kind, DesignTarget::kNode,
                                                input, frame, {}, dyad_allow));
    ASSIGN_OR_RETURN(Scored s, FitAndScore(design, input.fit));
    fit.node_prob = std::move(s.predictions);
    absorb(s);
    fit.ego_pred.resize(rows);
    fit.alter_pred.resize(rows);
    for (size_t r = 0; r < rows; ++r) {
      fit.ego_pred[r] = fit.node_prob[frame.ego[r]];
      fit.alter_pred[r] = fit.node_prob[frame.alter[r]];
    }
    fit.plugin_denominator =
        std::accumulate(fit.node_prob.begin(), fit.node_prob.end(), 0.0);
  } else if (kind == ModelKind::kDyad) {
    ASSIGN_OR_RETURN(Design design, BuildDesign(kind, DesignTarget::kDyad,
                                                input, frame, {}, dyad_allow));
    ASSIGN_OR_RETURN(Scored s, FitAndScore(design, input.fit));
    fit.dyad_aa = std::move(s.predictions);
    absorb(s);
    ASSIGN_OR_RETURN(Design margin,
                     BuildDesign(kind, DesignTarget::kEgoMargin, input, frame,
                                 {}, dyad_allow));
    ASSIGN_OR_RETURN(Scored m, FitAndScore(margin, input.fit));
    fit.ego_pred = std::move(m.predictions);
    absorb(m);
    for (size_t r = 0; r < rows; ++r) {
      fit.plugin_denominator += frame.inv_degree[r] * fit.ego_pred[r];
    }
  } else {
    ASSIGN_OR_RETURN(Design ego, BuildDesign(kind, DesignTarget::kEgo, input,
                                             frame, {}, dyad_allow));
    ASSIGN_OR_RETURN(Scored se, FitAndScore(ego, input.fit));
    fit.ego_pred = std::move(se.predictions);
    absorb(se);
    const DesignTarget alter_target = kind == ModelKind::kEgoAlterAugmented
                                          ? DesignTarget::kAlterAugmented
                                          : DesignTarget::kAlter;
    ASSIGN_OR_RETURN(Design alter, BuildDesign(kind, alter_target, input,
                                               frame, fit.ego_pred, dyad_allow));
    ASSIGN_OR_RETURN(Scored sa, FitAndScore(alter, input.fit));
    fit.alter_pred = std::move(sa.predictions);
    absorb(sa);
    // A node's probability is the average of its per-neighbor ego
    // predictions.
    fit.node_prob.assign(input.graph->node_count(), 0.0);
    for (size_t r = 0; r < rows; ++r) {
      fit.node_prob[frame.ego[r]] += frame.inv_degree[r] * fit.ego_pred[r];
    }
    fit.plugin_denominator =
        std::accumulate(fit.node_prob.begin(), fit.node_prob.end(), 0.0);
  }

  if (IsProductKind(kind)) {
    fit.dyad_aa.resize(rows);
    for (size_t r = 0; r < rows; ++r) {
      fit.dyad_aa[r] = fit.ego_pred[r] * fit.alter_pred[r];
    }
  }
  for (size_t r = 0; r < rows; ++r) {
    fit.numerator += frame.weight[r] * fit.dyad_aa[r];
  }
  return fit;
}

absl::StatusOr<double> TrueHomophily(const Graph& graph,
                                     std::span<const uint8_t> y,
                                     std::span<const double> actions) {
  const int32_t n = graph.node_count();
  if (y.size() != static_cast<size_t>(n)) {
    return absl::InvalidArgumentError("one label per node is required");
  }
  if (!actions.empty() && actions.size() != static_cast<size_t>(n)) {
    return absl::InvalidArgumentError("one action per node is required");
  }
  auto action = [&](NodeId j) { return actions.empty() ? 1.0 : actions[j]; };
  double group = 0.0;
  for (uint8_t v : y) group += v;
  if (group == 0.0) {
    return absl::FailedPreconditionError(
        "group a is empty; homophily is undefined");
  }

  double by_ego = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    if (!y[i] || graph.degree(i) == 0) continue;
    double inner = 0.0;
    for (NodeId j : graph.neighbors(i)) inner += action(j) * y[j];
    by_ego += inner / graph.degree(i);
  }
  double by_dyad = 0.0;
  for (int64_t s = 0; s < graph.dyad_count(); ++s) {
    const NodeId i = graph.slot_ego(s);
    const NodeId j = graph.slot_alter(s);
    by_dyad += (actions.empty() ? 1.0 / graph.degree(i)
                                : actions[j] / graph.degree(i)) *
               y[i] * y[j];
  }
  const double h1 = by_ego / group;
  const double h2 = by_dyad / group;
  if (std::abs(h1 - h2) > 1e-12 * std::max(1.0, std::abs(h1))) {
    return absl::InternalError(absl::StrFormat(
        "ego and dyad forms of the estimand disagree: %.17g vs %.17g", h1,
        h2));
  }
  return h1;
}

absl::StatusOr<OracleTruth> ComputeOracle(const EstimationInput& input) {
  OracleTruth o;
  for (uint8_t v : input.nodes->y) o.group_size += v;
  ASSIGN_OR_RETURN(o.h_true,
                   TrueHomophily(*input.graph, input.nodes->y, input.actions));
  return o;
}

absl::StatusOr<EstimateRecord> MakeRecord(
    const StrategyFit& fit, DenominatorMode mode, const EstimationInput& input,
    const DyadFrame& frame, const std::optional<OracleTruth>& oracle) {
  EstimateRecord rec;
  rec.model = fit.kind;
  rec.denominator_mode = mode;
  rec.n_labeled_nodes = input.mask->labeled_nodes().size();
  rec.n_labeled_dyads = input.mask->labeled_dyad_count();
  rec.flag = fit.Flag();

  double denominator = fit.plugin_denominator;
  if (fit.kind != ModelKind::kNoModel && mode == DenominatorMode::kOracle) {
    if (!oracle.has_value()) {
      return absl::FailedPreconditionError(
          "oracle denominator requested without complete labels");
    }
    denominator = oracle->group_size;
  }
  if (!(denominator > 0.0)) {
    return absl::FailedPreconditionError(
        absl::StrFormat("zero denominator for %s", ModelKindName(fit.kind)));
  }
  rec.h_hat = fit.numerator / denominator;
  if (oracle.has_value()) {
    rec.h_true = oracle->h_true;
    rec.relative_error = (rec.h_hat - rec.h_true) / rec.h_true;
    if (IsProductKind(fit.kind)) {
      ASSIGN_OR_RETURN(BiasTerms terms,
                       BiasDecomposition(frame, fit.ego_pred, fit.alter_pred,
                                         oracle->group_size));
      rec.r1 = terms.r1;
      rec.r2 = terms.r2;
    }
  }
  return rec;
}

absl::StatusOr<EstimateRecord> EstimateHomophily(ModelKind kind,
                                                 const EstimationInput& input,
                                                 DenominatorMode mode,
                                                 bool complete_labels) {
  ASSIGN_OR_RETURN(DyadFrame frame, BuildDyadFrame(input));
  ASSIGN_OR_RETURN(StrategyFit fit, FitStrategy(kind, input, frame));
  std::optional<OracleTruth> oracle;
  if (complete_labels) {
    ASSIGN_OR_RETURN(oracle, ComputeOracle(input));
  }
  return MakeRecord(fit, mode, input, frame, oracle);
}

absl::StatusOr<EstimateRecord> ExtendedHomophily(
    ModelKind kind, const EstimationInput& input,
    std::span<const double> actions, DenominatorMode mode,
    bool complete_labels) {
  if (actions.empty()) {
    return absl::InvalidArgumentError("actions are required");
  }
  EstimationInput extended = input;
  extended.actions = actions;
  return EstimateHomophily(kind, extended, mode, complete_labels);
}

absl::StatusOr<BiasTerms> BiasDecomposition(const DyadFrame& frame,
                                            std::span<const double> ego_pred,
                                            std::span<const double> alter_pred,
                                            double group_size) {
  if (ego_pred.size() != frame.size() || alter_pred.size() != frame.size()) {
    return absl::InvalidArgumentError(
        "bias decomposition needs ego and alter predictions for every dyad");
  }
  if (!(group_size > 0.0)) {
    return absl::FailedPreconditionError("group a is empty");
  }
  BiasTerms t;
  for (size_t r = 0; r < frame.size(); ++r) {
    const double e_ego = frame.y_ego[r] - ego_pred[r];
    const double e_alter = frame.y_alter[r] - alter_pred[r];
    t.r1 += frame.weight[r] * e_ego * frame.y_alter[r];
    t.r2 += frame.weight[r] * ego_pred[r] * e_alter;
  }
  t.r1 /= group_size;
  t.r2 /= group_size;
  return t;
}

double ColemanIndex(double proportion, double share) {
  const double s = proportion;
  const double w = share;
  if (s >= w) return w < 1.0 ? (s - w) / (1.0 - w) : 1.0;
  return (s - w) / w;
}

absl::StatusOr<ColemanResult> ColemanFromDyads(std::span<const double> aa,
                                               std::span<const double> ego,
                                               double group_size) {
  if (aa.size() != ego.size()) {
    return absl::InvalidArgumentError("dyad vectors differ in length");
  }
  if (!(group_size > 0.0) || aa.empty()) {
    return absl::FailedPreconditionError("group a is empty");
  }
  const double within = std::accumulate(aa.begin(), aa.end(), 0.0);
  const double slots = std::accumulate(ego.begin(), ego.end(), 0.0);
  if (!(slots > 0.0)) {
    return absl::FailedPreconditionError("group a has no dyads");
  }
  ColemanResult c;
  c.numerator = within / group_size;
  c.proportion = within / slots;
  c.chance_share = slots / static_cast<double>(aa.size());
  c.index = ColemanIndex(c.proportion, c.chance_share);
  return c;
}

absl::StatusOr<ColemanResult> Coleman(const Graph& graph,
                                      std::span<const double> values) {
  if (values.size() != static_cast<size_t>(graph.node_count())) {
    return absl::InvalidArgumentError("one value per node is required");
  }
  std::vector<double> aa(graph.dyad_count());
  std::vector<double> ego(graph.dyad_count());
  for (int64_t s = 0; s < graph.dyad_count(); ++s) {
    const double vi = values[graph.slot_ego(s)];
    aa[s] = vi * values[graph.slot_alter(s)];
    ego[s] = vi;
  }
  const double group = std::accumulate(values.begin(), values.end(), 0.0);
  ASSIGN_OR_RETURN(ColemanResult c, ColemanFromDyads(aa, ego, group));
  c.node_share = group / static_cast<double>(values.size());
  c.node_share_index = ColemanIndex(c.proportion, c.node_share);
  return c;
}

}  // namespace homophily
