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

#include "homophily/runner.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "homophily/csv.h"
#include "homophily/rng.h"
#include "homophily/status_macros.h"
#include "yaml-cpp/yaml.h"

namespace homophily {
namespace {

template <typename T>
absl::StatusOr<T> Scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    return absl::InvalidArgumentError(
        absl::StrFormat("config key '%s' has an invalid value", key));
  }
}

absl::StatusOr<std::vector<std::string>> StringList(const YAML::Node& node,
                                                    const std::string& key) {
  std::vector<std::string> out;
  if (node.IsScalar()) {
    out.push_back(node.as<std::string>());
    return out;
  }
  if (!node.IsSequence()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("config key '%s' must be a list", key));
  }
  for (const YAML::Node& item : node) {
    ASSIGN_OR_RETURN(std::string s, Scalar<std::string>(item, key));
    out.push_back(std::move(s));
  }
  return out;
}

template <typename T, typename Parser>
absl::StatusOr<std::vector<T>> ParsedList(const YAML::Node& node,
                                          const std::string& key,
                                          Parser parse) {
  ASSIGN_OR_RETURN(std::vector<std::string> names, StringList(node, key));
  std::vector<T> out;
  for (const std::string& n : names) {
    absl::StatusOr<T> v = parse(n);
    if (!v.ok()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "config key '%s': %s", key, v.status().message()));
    }
    out.push_back(*v);
  }
  return out;
}

std::string ErrorFlag(const absl::Status& status) {
  return absl::StrCat("error:", absl::StatusCodeToString(status.code()));
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "";
  return absl::StrFormat("%.17g", v);
}

std::string FormatOptional(const std::optional<double>& v) {
  return v.has_value() ? FormatDouble(*v) : "";
}

void AppendFailures(const ExperimentConfig& cfg, int rep, Dgp dgp,
                    const std::string& sampling, const absl::Status& status,
                    std::vector<EstimateRecord>& out) {
  for (ModelKind model : cfg.models) {
    for (DenominatorMode mode : cfg.denominator_modes) {
      EstimateRecord r;
      r.rep = rep;
      r.dgp = std::string(DgpName(dgp));
      r.sampling = sampling;
      r.model = model;
      r.denominator_mode = mode;
      r.flag = ErrorFlag(status);
      out.push_back(std::move(r));
    }
  }
}

}  // namespace

absl::Status ExperimentConfig::Validate() const {
  if (replications < 1) {
    return absl::InvalidArgumentError("config key 'replications' must be >= 1");
  }
  if (!(node_fraction > 0.0 && node_fraction < 1.0)) {
    return absl::InvalidArgumentError(
        "config key 'node_fraction' must lie in (0, 1)");
  }
  if (!(edge_fraction > 0.0 && edge_fraction < 1.0)) {
    return absl::InvalidArgumentError(
        "config key 'edge_fraction' must lie in (0, 1)");
  }
  if (links_per_node < 1 || n_nodes <= links_per_node) {
    return absl::InvalidArgumentError(
        "config keys 'n_nodes'/'links_per_node' need n_nodes > links_per_node "
        ">= 1");
  }
  if (!(exponent >= 0.0)) {
    return absl::InvalidArgumentError("config key 'exponent' must be >= 0");
  }
  if (workers < 0) {
    return absl::InvalidArgumentError("config key 'workers' must be >= 0");
  }
  if (dgps.empty() || samplings.empty() || models.empty() ||
      denominator_modes.empty()) {
    return absl::InvalidArgumentError(
        "config lists 'dgps', 'samplings', 'models', 'denominator_modes' must "
        "be nonempty");
  }
  return absl::OkStatus();
}

absl::StatusOr<ExperimentConfig> ParseConfig(absl::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("config is not valid YAML: %s", e.what()));
  }
  ExperimentConfig cfg;
  if (root.IsNull()) return cfg;
  if (!root.IsMap()) {
    return absl::InvalidArgumentError("config must be a key-value mapping");
  }
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (key == "n_nodes") {
      ASSIGN_OR_RETURN(cfg.n_nodes, Scalar<int32_t>(v, key));
    } else if (key == "links_per_node" || key == "m") {
      ASSIGN_OR_RETURN(cfg.links_per_node, Scalar<int32_t>(v, key));
    } else if (key == "exponent" || key == "k") {
      ASSIGN_OR_RETURN(cfg.exponent, Scalar<double>(v, key));
    } else if (key == "node_fraction") {
      ASSIGN_OR_RETURN(cfg.node_fraction, Scalar<double>(v, key));
    } else if (key == "edge_fraction") {
      ASSIGN_OR_RETURN(cfg.edge_fraction, Scalar<double>(v, key));
    } else if (key == "node_target_count") {
      ASSIGN_OR_RETURN(cfg.node_target_count, Scalar<double>(v, key));
    } else if (key == "edge_target_count") {
      ASSIGN_OR_RETURN(cfg.edge_target_count, Scalar<double>(v, key));
    } else if (key == "replications") {
      ASSIGN_OR_RETURN(cfg.replications, Scalar<int>(v, key));
    } else if (key == "base_seed" || key == "seed") {
      ASSIGN_OR_RETURN(cfg.base_seed, Scalar<uint64_t>(v, key));
    } else if (key == "workers") {
      ASSIGN_OR_RETURN(cfg.workers, Scalar<int>(v, key));
    } else if (key == "dgps") {
      ASSIGN_OR_RETURN(cfg.dgps, ParsedList<Dgp>(v, key, ParseDgp));
    } else if (key == "samplings") {
      ASSIGN_OR_RETURN(cfg.samplings,
                       ParsedList<SampleLevel>(v, key, ParseSampleLevel));
    } else if (key == "models") {
      ASSIGN_OR_RETURN(cfg.models,
                       ParsedList<ModelKind>(v, key, ParseModelKind));
    } else if (key == "denominator_modes") {
      ASSIGN_OR_RETURN(cfg.denominator_modes,
                       ParsedList<DenominatorMode>(v, key, ParseDenominatorMode));
    } else if (key == "z_transform") {
      ASSIGN_OR_RETURN(std::string s, Scalar<std::string>(v, key));
      absl::StatusOr<ZTransform> t = ParseZTransform(s);
      if (!t.ok()) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "config key '%s': %s", key, t.status().message()));
      }
      cfg.outcome.z_transform = *t;
    } else if (key == "x_coef") {
      ASSIGN_OR_RETURN(cfg.outcome.x_coef, Scalar<double>(v, key));
    } else if (key == "z_coef") {
      ASSIGN_OR_RETURN(cfg.outcome.z_coef, Scalar<double>(v, key));
    } else if (key == "biased_degree_coef") {
      ASSIGN_OR_RETURN(cfg.biased.degree, Scalar<double>(v, key));
    } else if (key == "biased_feature_coef") {
      ASSIGN_OR_RETURN(cfg.biased.feature, Scalar<double>(v, key));
    } else {
      return absl::InvalidArgumentError(
          absl::StrFormat("unknown config key '%s'", key));
    }
  }
  RETURN_IF_ERROR(cfg.Validate());
  return cfg;
}

absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open config '%s'", path));
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str());
}

absl::StatusOr<Graph> ReplicationGraph(const ExperimentConfig& cfg, int rep) {
  Rng rng = MakeStream(cfg.base_seed, rep, "graph");
  return GeneratePreferentialAttachment(
      {cfg.n_nodes, cfg.links_per_node, cfg.exponent}, rng);
}

absl::StatusOr<NodeTable> ReplicationNodes(const ExperimentConfig& cfg,
                                           int rep, Dgp dgp,
                                           const Graph& graph) {
  Rng rng = MakeStream(cfg.base_seed, rep, absl::StrCat("nodes/", DgpName(dgp)));
  ASSIGN_OR_RETURN(NodeTable nt,
                   GenerateFeatures(graph, dgp, cfg.outcome, rng));
  GenerateOutcomes(nt, dgp, cfg.outcome, rng);
  return nt;
}

namespace {

absl::StatusOr<GroundTruthMask> ReplicationMask(const ExperimentConfig& cfg,
                                                int rep, Dgp dgp,
                                                SampleLevel level,
                                                const Graph& graph,
                                                const NodeTable& nodes) {
  Rng rng = MakeStream(
      cfg.base_seed, rep,
      absl::StrCat("mask/", DgpName(dgp), "/", SampleLevelName(level)));
  if (dgp != Dgp::kSampled) {
    return level == SampleLevel::kNode
               ? RandomNodeSample(graph, cfg.node_fraction, rng)
               : RandomEdgeSample(graph, cfg.edge_fraction, rng);
  }
  if (level == SampleLevel::kNode) {
    const double target = cfg.node_target_count.value_or(
        std::round(cfg.node_fraction * graph.node_count()));
    return BiasedNodeSample(graph, nodes, target, cfg.biased, rng);
  }
  const double target = cfg.edge_target_count.value_or(
      std::round(cfg.edge_fraction * static_cast<double>(graph.edge_count())));
  return BiasedEdgeSample(graph, nodes, target, cfg.biased, rng);
}

void RunCell(const ExperimentConfig& cfg, int rep, Dgp dgp, SampleLevel level,
             const Graph& graph, const NodeTable& nodes,
             const std::optional<OracleTruth>& oracle,
             std::vector<EstimateRecord>& out) {
  const SampleMode mode =
      dgp == Dgp::kSampled ? SampleMode::kBiased : SampleMode::kRandom;
  const std::string sampling = SamplingName(level, mode);
  absl::StatusOr<GroundTruthMask> mask =
      ReplicationMask(cfg, rep, dgp, level, graph, nodes);
  if (!mask.ok()) {
    AppendFailures(cfg, rep, dgp, sampling, mask.status(), out);
    return;
  }
  EstimationInput input;
  input.graph = &graph;
  input.nodes = &nodes;
  input.mask = &*mask;
  absl::StatusOr<DyadFrame> frame = BuildDyadFrame(input);
  if (!frame.ok()) {
    AppendFailures(cfg, rep, dgp, sampling, frame.status(), out);
    return;
  }

  // Out-of-sample node metrics are evaluated on the unlabeled nodes.
  std::vector<NodeId> eval_nodes;
  std::vector<uint8_t> eval_labels;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (!mask->node_labeled(v)) {
      eval_nodes.push_back(v);
      eval_labels.push_back(nodes.y[v]);
    }
  }

  for (ModelKind model : cfg.models) {
    absl::StatusOr<StrategyFit> fit = FitStrategy(model, input, *frame);
    std::optional<NodeMetrics> node_metrics;
    if (fit.ok() && !fit->node_prob.empty()) {
      std::vector<double> probs;
      probs.reserve(eval_nodes.size());
      for (NodeId v : eval_nodes) probs.push_back(fit->node_prob[v]);
      absl::StatusOr<NodeMetrics> m = NodeLevelMetrics(probs, eval_labels);
      if (m.ok()) node_metrics = *m;
    }
    for (DenominatorMode dm : cfg.denominator_modes) {
      absl::StatusOr<EstimateRecord> rec =
          fit.ok() ? MakeRecord(*fit, dm, input, *frame, oracle)
                   : absl::StatusOr<EstimateRecord>(fit.status());
      EstimateRecord r;
      if (rec.ok()) {
        r = *std::move(rec);
      } else {
        r.model = model;
        r.denominator_mode = dm;
        r.flag = ErrorFlag(rec.status());
        r.h_true = oracle ? oracle->h_true
                          : std::numeric_limits<double>::quiet_NaN();
      }
      r.rep = rep;
      r.dgp = std::string(DgpName(dgp));
      r.sampling = sampling;
      r.n_labeled_nodes = mask->labeled_nodes().size();
      r.n_labeled_dyads = mask->labeled_dyad_count();
      if (node_metrics.has_value()) {
        r.node_auc = node_metrics->auc;
        r.node_accuracy = node_metrics->accuracy;
      }
      out.push_back(std::move(r));
    }
  }
}

}  // namespace

absl::StatusOr<ReplicationData> MakeReplicationData(const ExperimentConfig& cfg,
                                                    int rep, Dgp dgp,
                                                    SampleLevel level) {
  ReplicationData d;
  ASSIGN_OR_RETURN(d.graph, ReplicationGraph(cfg, rep));
  ASSIGN_OR_RETURN(d.nodes, ReplicationNodes(cfg, rep, dgp, d.graph));
  ASSIGN_OR_RETURN(d.mask,
                   ReplicationMask(cfg, rep, dgp, level, d.graph, d.nodes));
  d.mode = dgp == Dgp::kSampled ? SampleMode::kBiased : SampleMode::kRandom;
  d.sampling = SamplingName(level, d.mode);
  return d;
}

std::vector<EstimateRecord> RunReplication(const ExperimentConfig& cfg,
                                           int rep) {
  std::vector<EstimateRecord> out;
  absl::StatusOr<Graph> graph = ReplicationGraph(cfg, rep);
  for (Dgp dgp : cfg.dgps) {
    const SampleMode mode =
        dgp == Dgp::kSampled ? SampleMode::kBiased : SampleMode::kRandom;
    if (!graph.ok()) {
      for (SampleLevel level : cfg.samplings) {
        AppendFailures(cfg, rep, dgp, SamplingName(level, mode),
                       graph.status(), out);
      }
      continue;
    }
    absl::StatusOr<NodeTable> nodes = ReplicationNodes(cfg, rep, dgp, *graph);
    std::optional<OracleTruth> oracle;
    absl::Status failure = nodes.status();
    if (nodes.ok()) {
      EstimationInput probe;
      probe.graph = &*graph;
      probe.nodes = &*nodes;
      absl::StatusOr<OracleTruth> o = ComputeOracle(probe);
      if (o.ok()) {
        oracle = *o;
      } else {
        failure = o.status();
      }
    }
    for (SampleLevel level : cfg.samplings) {
      if (!failure.ok()) {
        AppendFailures(cfg, rep, dgp, SamplingName(level, mode), failure, out);
        continue;
      }
      RunCell(cfg, rep, dgp, level, *graph, *nodes, oracle, out);
    }
  }
  return out;
}

absl::StatusOr<BatteryResult> RunBattery(const ExperimentConfig& cfg) {
  RETURN_IF_ERROR(cfg.Validate());
  std::vector<std::vector<EstimateRecord>> per_rep(cfg.replications);
  int workers = cfg.workers > 0
                    ? cfg.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, cfg.replications);

  std::atomic<int> next{0};
  auto work = [&] {
    for (int rep = next++; rep < cfg.replications; rep = next++) {
      per_rep[rep] = RunReplication(cfg, rep);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();

  BatteryResult result;
  for (std::vector<EstimateRecord>& recs : per_rep) {
    for (EstimateRecord& r : recs) {
      if (r.failed()) ++result.failed_records;
      result.records.push_back(std::move(r));
    }
  }
  result.summary = Summarize(result.records);
  return result;
}

void WriteResultsCsv(const std::vector<EstimateRecord>& records,
                     std::ostream& out) {
  out << "rep,dgp,sampling,model,denominator_mode,H_true,H_hat,rel_bias,"
         "node_auc,node_accuracy,n_labeled_nodes,n_labeled_dyads,flag\n";
  for (const EstimateRecord& r : records) {
    out << r.rep << ',' << r.dgp << ',' << r.sampling << ','
        << ModelKindName(r.model) << ','
        << DenominatorModeName(r.denominator_mode) << ','
        << FormatDouble(r.h_true) << ',' << FormatDouble(r.h_hat) << ','
        << FormatDouble(r.relative_error) << ',' << FormatOptional(r.node_auc)
        << ',' << FormatOptional(r.node_accuracy) << ',' << r.n_labeled_nodes
        << ',' << r.n_labeled_dyads << ',' << r.flag << '\n';
  }
}

absl::StatusOr<std::vector<EstimateRecord>> ReadResultsCsv(std::istream& in) {
  ASSIGN_OR_RETURN(CsvTable t, ReadCsv(in));
  const std::vector<std::string> schema = {
      "rep",      "dgp",          "sampling",      "model",
      "denominator_mode", "H_true", "H_hat",     "rel_bias",
      "node_auc", "node_accuracy", "n_labeled_nodes", "n_labeled_dyads",
      "flag"};
  if (t.header != schema) {
    return absl::InvalidArgumentError(
        "results CSV header does not match the runner schema");
  }
  auto number = [](const std::string& s, double& v) {
    if (s.empty()) {
      v = std::numeric_limits<double>::quiet_NaN();
      return true;
    }
    return absl::SimpleAtod(s, &v);
  };
  std::vector<EstimateRecord> out;
  size_t line = 1;
  for (const std::vector<std::string>& row : t.rows) {
    ++line;
    EstimateRecord r;
    double auc = 0.0, acc = 0.0;
    uint64_t n_nodes = 0, n_dyads = 0;
    absl::StatusOr<ModelKind> model = ParseModelKind(row[3]);
    absl::StatusOr<DenominatorMode> mode = ParseDenominatorMode(row[4]);
    if (!absl::SimpleAtoi(row[0], &r.rep) || !model.ok() || !mode.ok() ||
        !number(row[5], r.h_true) || !number(row[6], r.h_hat) ||
        !number(row[7], r.relative_error) || !number(row[8], auc) ||
        !number(row[9], acc) || !absl::SimpleAtoi(row[10], &n_nodes) ||
        !absl::SimpleAtoi(row[11], &n_dyads)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("results CSV line %d is malformed", line));
    }
    r.dgp = row[1];
    r.sampling = row[2];
    r.model = *model;
    r.denominator_mode = *mode;
    if (!std::isnan(auc)) r.node_auc = auc;
    if (!std::isnan(acc)) r.node_accuracy = acc;
    r.n_labeled_nodes = n_nodes;
    r.n_labeled_dyads = n_dyads;
    r.flag = row[12];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace homophily
