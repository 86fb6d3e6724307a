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

#include "cli/commands.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <utility>

#include "CLI11.hpp"
#include "absl/container/flat_hash_map.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "homophily/csv.h"
#include "homophily/metrics.h"
#include "homophily/rng.h"
#include "homophily/status_macros.h"

namespace homophily::cli {
namespace {

namespace fs = std::filesystem;

absl::StatusOr<std::ofstream> OpenOutput(const fs::path& path) {
  std::ofstream out(path);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrFormat("cannot write '%s'", path.string()));
  }
  return out;
}

absl::Status EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrFormat("cannot create directory '%s': %s", dir, ec.message()));
  }
  return absl::OkStatus();
}

std::optional<int64_t> AsInteger(const std::string& s) {
  int64_t v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

absl::StatusOr<double> AsDouble(const std::string& s, absl::string_view what) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("%s: '%s' is not a number", what, s));
}

std::string Num(double v) { return absl::StrFormat("%.17g", v); }

// Dense ids for the endpoints of the edge list.
class IdIndex {
 public:
  explicit IdIndex(std::set<std::string> raw) {
    bool numeric = true;
    for (const std::string& s : raw) {
      if (!AsInteger(s)) {
        numeric = false;
        break;
      }
    }
    ids_.assign(raw.begin(), raw.end());
    if (numeric) {
      std::sort(ids_.begin(), ids_.end(),
                [](const std::string& a, const std::string& b) {
                  return *AsInteger(a) < *AsInteger(b);
                });
    }
    for (size_t i = 0; i < ids_.size(); ++i) {
      dense_.emplace(ids_[i], static_cast<NodeId>(i));
    }
  }

  absl::StatusOr<NodeId> Find(const std::string& id,
                              absl::string_view file) const {
    auto it = dense_.find(id);
    if (it == dense_.end()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s references node '%s' which is not in the edge list", file, id));
    }
    return it->second;
  }

  const std::vector<std::string>& ids() const { return ids_; }
  size_t size() const { return ids_.size(); }

 private:
  std::vector<std::string> ids_;
  absl::flat_hash_map<std::string, NodeId> dense_;
};

// Per-node values from a two-column file that must cover every node.
absl::StatusOr<std::vector<double>> ReadNodeValues(const std::string& path,
                                                   const std::string& column,
                                                   const IdIndex& index) {
  ASSIGN_OR_RETURN(CsvTable table, ReadCsvFile(path));
  ASSIGN_OR_RETURN(std::vector<size_t> cols,
                   RequireColumns(table, {"node_id", column}));
  std::vector<double> values(index.size(), 0.0);
  std::vector<uint8_t> seen(index.size(), 0);
  for (const auto& row : table.rows) {
    ASSIGN_OR_RETURN(NodeId v, index.Find(row[cols[0]], path));
    ASSIGN_OR_RETURN(values[v], AsDouble(row[cols[1]], path));
    seen[v] = 1;
  }
  for (size_t v = 0; v < seen.size(); ++v) {
    if (!seen[v]) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s has no value for node '%s'", path, index.ids()[v]));
    }
  }
  return values;
}

absl::StatusOr<std::vector<ModelKind>> ParseModels(const std::string& name) {
  if (name == "both") {
    return std::vector<ModelKind>{ModelKind::kNode,
                                  ModelKind::kEgoAlterAugmented};
  }
  if (name == "all") {
    return std::vector<ModelKind>(std::begin(kAllModelKinds),
                                  std::end(kAllModelKinds));
  }
  ASSIGN_OR_RETURN(ModelKind kind, ParseModelKind(name));
  return std::vector<ModelKind>{kind};
}

absl::Status WriteTable(const std::vector<SummaryCell>& summary,
                        TableMetric metric, DenominatorMode mode,
                        const fs::path& path) {
  ASSIGN_OR_RETURN(std::ofstream out, OpenOutput(path));
  WriteSummaryTableCsv(summary, metric, mode, out);
  return absl::OkStatus();
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  if (status.ok()) return kExitOk;
  return status.code() == absl::StatusCode::kInvalidArgument ? kExitUsage
                                                             : kExitFailure;
}

absl::Status WriteReportFiles(const std::vector<EstimateRecord>& records,
                              const std::string& out_dir) {
  RETURN_IF_ERROR(EnsureDir(out_dir));
  const fs::path dir(out_dir);
  const std::vector<SummaryCell> summary = Summarize(records);
  std::set<DenominatorMode> modes;
  for (const SummaryCell& c : summary) modes.insert(c.denominator_mode);
  for (DenominatorMode mode : modes) {
    const std::string suffix(DenominatorModeName(mode));
    RETURN_IF_ERROR(WriteTable(summary, TableMetric::kBias, mode,
                               dir / ("bias_table_" + suffix + ".csv")));
    RETURN_IF_ERROR(WriteTable(summary, TableMetric::kMae, mode,
                               dir / ("mae_table_" + suffix + ".csv")));
  }
  {
    ASSIGN_OR_RETURN(std::ofstream out, OpenOutput(dir / "summary.csv"));
    WriteSummaryCsv(summary, out);
  }
  ASSIGN_OR_RETURN(std::ofstream out, OpenOutput(dir / "auc_vs_bias.csv"));
  WriteAucVsBiasCsv(summary, out);
  return absl::OkStatus();
}

absl::Status ExportReplication(const ExperimentConfig& cfg, int rep, Dgp dgp,
                               SampleLevel level, const std::string& dir) {
  ASSIGN_OR_RETURN(ReplicationData d, MakeReplicationData(cfg, rep, dgp, level));
  RETURN_IF_ERROR(EnsureDir(dir));
  const fs::path base(dir);
  {
    ASSIGN_OR_RETURN(std::ofstream out, OpenOutput(base / "edges.csv"));
    WriteEdgeListCsv(d.graph, out);
  }
  {
    ASSIGN_OR_RETURN(std::ofstream out, OpenOutput(base / "labels.csv"));
    out << "node_id,label\n";
    for (NodeId v : d.mask.labeled_nodes()) {
      out << v << ',' << (d.nodes.y[v] ? "a" : "b") << '\n';
    }
  }
  {
    ASSIGN_OR_RETURN(std::ofstream out, OpenOutput(base / "features.csv"));
    out << "node_id,x\n";
    for (size_t v = 0; v < d.nodes.size(); ++v) {
      out << v << ',' << Num(d.nodes.x[v]) << '\n';
    }
  }
  {
    ASSIGN_OR_RETURN(std::ofstream out, OpenOutput(base / "labeled_dyads.csv"));
    WriteMaskDyadsCsv(d.graph, d.mask, out);
  }
  ASSIGN_OR_RETURN(std::ofstream out, OpenOutput(base / "nodes.csv"));
  WriteNodeTableCsv(d.nodes, d.mask.node_flags(), out);
  return absl::OkStatus();
}

absl::Status Simulate(const SimulateOptions& options, std::ostream& log) {
  ASSIGN_OR_RETURN(ExperimentConfig cfg, LoadConfig(options.config_path));
  if (options.seed.has_value()) cfg.base_seed = *options.seed;
  if (options.workers.has_value()) cfg.workers = *options.workers;
  RETURN_IF_ERROR(cfg.Validate());
  if (options.export_rep.has_value() &&
      (*options.export_rep < 0 || *options.export_rep >= cfg.replications)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("--export-rep must be in [0, %d)", cfg.replications));
  }
  RETURN_IF_ERROR(EnsureDir(options.out_dir));

  ASSIGN_OR_RETURN(BatteryResult result, RunBattery(cfg));
  const fs::path dir(options.out_dir);
  {
    ASSIGN_OR_RETURN(std::ofstream out, OpenOutput(dir / "results.csv"));
    WriteResultsCsv(result.records, out);
  }
  RETURN_IF_ERROR(WriteReportFiles(result.records, options.out_dir));

  if (options.export_rep.has_value()) {
    for (Dgp dgp : cfg.dgps) {
      for (SampleLevel level : cfg.samplings) {
        const SampleMode mode =
            dgp == Dgp::kSampled ? SampleMode::kBiased : SampleMode::kRandom;
        const fs::path cell = dir / "export" /
                              absl::StrFormat("rep%d", *options.export_rep) /
                              absl::StrFormat("%s_%s", DgpName(dgp),
                                              SamplingName(level, mode));
        RETURN_IF_ERROR(ExportReplication(cfg, *options.export_rep, dgp, level,
                                          cell.string()));
      }
    }
  }
  log << absl::StrFormat("replications: %d\nrecords: %d\nfailed: %d\n",
                         cfg.replications, result.records.size(),
                         result.failed_records);
  log << "output: " << options.out_dir << '\n';
  return absl::OkStatus();
}

absl::StatusOr<ExternalData> LoadExternal(const ExternalInputs& inputs) {
  ASSIGN_OR_RETURN(CsvTable edge_table, ReadCsvFile(inputs.edges_path));
  ASSIGN_OR_RETURN(std::vector<size_t> ecols,
                   RequireColumns(edge_table, {"src", "dst"}));
  std::set<std::string> raw;
  for (const auto& row : edge_table.rows) {
    raw.insert(row[ecols[0]]);
    raw.insert(row[ecols[1]]);
  }
  const IdIndex index(std::move(raw));

  std::set<std::pair<NodeId, NodeId>> unique;
  for (const auto& row : edge_table.rows) {
    ASSIGN_OR_RETURN(NodeId a, index.Find(row[ecols[0]], inputs.edges_path));
    ASSIGN_OR_RETURN(NodeId b, index.Find(row[ecols[1]], inputs.edges_path));
    if (a == b) {
      return absl::InvalidArgumentError(
          absl::StrFormat("self-loop on node '%s'", row[ecols[0]]));
    }
    unique.emplace(std::min(a, b), std::max(a, b));
  }
  std::vector<Edge> edges;
  edges.reserve(unique.size());
  for (const auto& [a, b] : unique) edges.push_back(Edge{a, b});

  ExternalData data;
  data.ids = index.ids();
  ASSIGN_OR_RETURN(data.graph, Graph::FromEdges(
                                   static_cast<int32_t>(index.size()), edges));
  const size_t n = index.size();

  if (!inputs.features_path.empty()) {
    ASSIGN_OR_RETURN(data.nodes.x,
                     ReadNodeValues(inputs.features_path, "x", index));
  } else {
    data.nodes.x.assign(n, 0.0);
    data.features.use_x = false;
  }
  data.nodes.z.assign(n, 0.0);
  data.nodes.p.assign(n, 0.0);
  data.nodes.y.assign(n, 0);

  if (!inputs.actions_path.empty()) {
    ASSIGN_OR_RETURN(data.actions,
                     ReadNodeValues(inputs.actions_path, "a", index));
    for (double a : data.actions) {
      if (!(a >= 0.0)) {
        return absl::InvalidArgumentError("actions must be nonnegative");
      }
    }
  }

  ASSIGN_OR_RETURN(CsvTable label_table, ReadCsvFile(inputs.labels_path));
  ASSIGN_OR_RETURN(std::vector<size_t> lcols,
                   RequireColumns(label_table, {"node_id", "label"}));
  std::vector<uint8_t> labeled(n, 0);
  std::vector<NodeId> labeled_nodes;
  bool any_group = false;
  for (const auto& row : label_table.rows) {
    ASSIGN_OR_RETURN(NodeId v, index.Find(row[lcols[0]], inputs.labels_path));
    const uint8_t y = row[lcols[1]] == inputs.group ? 1 : 0;
    if (labeled[v] && data.nodes.y[v] != y) {
      return absl::InvalidArgumentError(
          absl::StrFormat("conflicting labels for node '%s'", row[lcols[0]]));
    }
    if (!labeled[v]) labeled_nodes.push_back(v);
    labeled[v] = 1;
    data.nodes.y[v] = y;
    any_group = any_group || y == 1;
  }
  if (!any_group) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "no labeled node belongs to group '%s'", inputs.group));
  }
  std::sort(labeled_nodes.begin(), labeled_nodes.end());

  if (inputs.labeled_dyads_path.empty()) {
    data.mask = GroundTruthMask::FromNodes(data.graph, std::move(labeled_nodes));
    return data;
  }
  ASSIGN_OR_RETURN(CsvTable dyad_table, ReadCsvFile(inputs.labeled_dyads_path));
  ASSIGN_OR_RETURN(std::vector<size_t> dcols,
                   RequireColumns(dyad_table, {"src", "dst"}));
  std::set<EdgeId> labeled_edges;
  for (const auto& row : dyad_table.rows) {
    ASSIGN_OR_RETURN(NodeId a,
                     index.Find(row[dcols[0]], inputs.labeled_dyads_path));
    ASSIGN_OR_RETURN(NodeId b,
                     index.Find(row[dcols[1]], inputs.labeled_dyads_path));
    std::optional<EdgeId> e = data.graph.FindEdge(a, b);
    if (!e.has_value()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "labeled dyad (%s, %s) is not an edge", row[dcols[0]], row[dcols[1]]));
    }
    if (!labeled[a] || !labeled[b]) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "labeled dyad (%s, %s) has an unlabeled endpoint", row[dcols[0]],
          row[dcols[1]]));
    }
    labeled_edges.insert(*e);
  }
  data.mask = GroundTruthMask::FromNodesAndEdges(
      data.graph, std::move(labeled_nodes),
      std::vector<EdgeId>(labeled_edges.begin(), labeled_edges.end()));
  return data;
}

void WriteIdMapCsv(const ExternalData& data, std::ostream& out) {
  out << "dense_id,node_id\n";
  for (size_t i = 0; i < data.ids.size(); ++i) {
    out << i << ',' << data.ids[i] << '\n';
  }
}

absl::StatusOr<std::vector<EstimateRow>> EstimateRows(
    const ExternalData& data, const std::vector<ModelKind>& models) {
  EstimationInput input;
  input.graph = &data.graph;
  input.nodes = &data.nodes;
  input.mask = &data.mask;
  input.actions = data.actions;
  input.features = data.features;
  ASSIGN_OR_RETURN(DyadFrame frame, BuildDyadFrame(input));

  std::vector<EstimateRow> rows;
  for (ModelKind kind : models) {
    ASSIGN_OR_RETURN(StrategyFit fit, FitStrategy(kind, input, frame));
    ASSIGN_OR_RETURN(EstimateRecord rec,
                     MakeRecord(fit, DenominatorMode::kPlugIn, input, frame,
                                std::nullopt));
    EstimateRow row;
    row.model = kind;
    row.h_hat = rec.h_hat;
    row.flag = rec.flag;
    if (kind == ModelKind::kNoModel) {
      std::vector<double> aa;
      std::vector<double> ego;
      for (size_t r = 0; r < frame.size(); ++r) {
        if (!frame.dyad_labeled[r]) continue;
        aa.push_back(frame.y_aa[r]);
        ego.push_back(frame.y_ego[r]);
      }
      double group = 0.0;
      for (NodeId v : data.mask.labeled_nodes()) group += data.nodes.y[v];
      ASSIGN_OR_RETURN(row.coleman, ColemanFromDyads(aa, ego, group));
    } else {
      ASSIGN_OR_RETURN(row.coleman,
                       ColemanFromDyads(fit.dyad_aa, fit.ego_pred,
                                        fit.plugin_denominator));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

absl::Status Estimate(const EstimateOptions& options, std::ostream& out) {
  ASSIGN_OR_RETURN(std::vector<ModelKind> models, ParseModels(options.model));
  ASSIGN_OR_RETURN(ExternalData data, LoadExternal(options.inputs));
  ASSIGN_OR_RETURN(std::vector<EstimateRow> rows, EstimateRows(data, models));

  const std::string header =
      "model,H_hat,coleman_numerator,coleman_proportion,coleman_index,flag";
  std::vector<std::string> lines;
  for (const EstimateRow& r : rows) {
    lines.push_back(absl::StrFormat(
        "%s,%s,%s,%s,%s,%s", ModelKindName(r.model), Num(r.h_hat),
        Num(r.coleman.numerator), Num(r.coleman.proportion),
        Num(r.coleman.index), r.flag));
  }

  out << absl::StrFormat("nodes: %d\nedges: %d\n", data.graph.node_count(),
                         data.graph.edge_count());
  out << absl::StrFormat("labeled_nodes: %d\nlabeled_dyads: %d\n",
                         data.mask.labeled_nodes().size(),
                         data.mask.labeled_dyad_count());
  out << "group: " << options.inputs.group << '\n';
  out << "denominator: plugin\n";
  if (!data.actions.empty()) out << "weights: actions\n";
  out << header << '\n' << absl::StrJoin(lines, "\n") << '\n';

  if (!options.out_dir.empty()) {
    RETURN_IF_ERROR(EnsureDir(options.out_dir));
    const fs::path dir(options.out_dir);
    {
      ASSIGN_OR_RETURN(std::ofstream f, OpenOutput(dir / "estimate.csv"));
      f << header << '\n' << absl::StrJoin(lines, "\n") << '\n';
    }
    ASSIGN_OR_RETURN(std::ofstream f, OpenOutput(dir / "node_ids.csv"));
    WriteIdMapCsv(data, f);
  }
  return absl::OkStatus();
}

absl::Status Diagnose(const DiagnoseOptions& options, std::ostream& out) {
  ASSIGN_OR_RETURN(ModelKind kind, ParseModelKind(options.model));
  ASSIGN_OR_RETURN(ExternalData data, LoadExternal(options.inputs));
  EstimationInput input;
  input.graph = &data.graph;
  input.nodes = &data.nodes;
  input.mask = &data.mask;
  input.actions = data.actions;
  input.features = data.features;
  ASSIGN_OR_RETURN(DyadFrame frame, BuildDyadFrame(input));
  DiagnosticOptions dopts;
  dopts.folds = options.folds;
  dopts.permutations = options.permutations;
  Rng rng = MakeStream(options.seed, 0, "diagnose");
  ASSIGN_OR_RETURN(DiagnosticResult r,
                   CvResidualDiagnostic(kind, input, frame, dopts, rng));

  out << "model: " << ModelKindName(kind) << '\n';
  out << "labeled_dyads: " << r.dyads << '\n';
  out << "fold,dyads,weighted_residual_sum\n";
  for (size_t f = 0; f < r.fold_sums.size(); ++f) {
    out << f << ',' << r.fold_sizes[f] << ',' << Num(r.fold_sums[f]) << '\n';
  }
  out << "total: " << Num(r.total) << '\n';
  out << absl::StrFormat("null_interval: [%s, %s]\n", Num(r.null_low),
                         Num(r.null_high));
  out << "flagged: " << (r.flagged ? "yes" : "no") << '\n';
  return absl::OkStatus();
}

absl::Status Report(const ReportOptions& options, std::ostream& log) {
  std::ifstream in(options.results_path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open '%s'", options.results_path));
  }
  ASSIGN_OR_RETURN(std::vector<EstimateRecord> records, ReadResultsCsv(in));
  RETURN_IF_ERROR(WriteReportFiles(records, options.out_dir));
  log << "records: " << records.size() << '\n';
  log << "output: " << options.out_dir << '\n';
  return absl::OkStatus();
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Homophily estimation from predicted node attributes"};
  app.require_subcommand(1);

  SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Run a Monte-Carlo battery");
  simulate->add_option("--config", sim.config_path, "YAML config")->required();
  simulate->add_option("--out", sim.out_dir, "Output directory")->required();
  simulate->add_option("--seed", sim.seed, "Overrides base_seed");
  simulate->add_option("--workers", sim.workers, "Worker threads");
  simulate->add_option("--export-rep", sim.export_rep,
                       "Export the inputs of one replication");

  auto add_inputs = [](CLI::App* cmd, ExternalInputs& in) {
    cmd->add_option("--edges", in.edges_path, "Edge list CSV (src,dst)")
        ->required();
    cmd->add_option("--labels", in.labels_path, "Labels CSV (node_id,label)")
        ->required();
    cmd->add_option("--group", in.group, "Label of group a");
    cmd->add_option("--features", in.features_path, "Features CSV (node_id,x)");
    cmd->add_option("--actions", in.actions_path, "Actions CSV (node_id,a)");
    cmd->add_option("--labeled-dyads", in.labeled_dyads_path,
                    "Ground-truth dyads CSV (src,dst)");
  };

  EstimateOptions est;
  CLI::App* estimate =
      app.add_subcommand("estimate", "Estimate homophily on external data");
  add_inputs(estimate, est.inputs);
  estimate->add_option("--model", est.model,
                       "Model kind, 'both' (node and augmented ego-alter) "
                       "or 'all'");
  estimate->add_option("--out", est.out_dir, "Output directory");

  DiagnoseOptions diag;
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "Cross-validated residual diagnostic");
  add_inputs(diagnose, diag.inputs);
  diagnose->add_option("--model", diag.model, "Model kind");
  diagnose->add_option("--folds", diag.folds, "Number of folds")
      ->check(CLI::Range(2, 1000));
  diagnose->add_option("--permutations", diag.permutations,
                       "Permutations for the null interval")
      ->check(CLI::Range(1, 1000000));
  diagnose->add_option("--seed", diag.seed, "Random seed");

  ReportOptions rep;
  CLI::App* report = app.add_subcommand("report", "Tables from a results CSV");
  report->add_option("--results", rep.results_path, "Results CSV")->required();
  report->add_option("--out", rep.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  absl::Status status;
  if (simulate->parsed()) {
    status = Simulate(sim, out);
  } else if (estimate->parsed()) {
    status = Estimate(est, out);
  } else if (diagnose->parsed()) {
    status = Diagnose(diag, out);
  } else {
    status = Report(rep, out);
  }
  if (!status.ok()) err << "error: " << status.message() << '\n';
  return ExitCodeFor(status);
}

}  // namespace homophily::cli
