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

#ifndef HOMOPHILY_TOOLS_CLI_COMMANDS_H_
#define HOMOPHILY_TOOLS_CLI_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "homophily/estimators.h"
#include "homophily/graph.h"
#include "homophily/runner.h"
#include "homophily/sampling.h"
#include "homophily/simgen.h"

namespace homophily::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Parses `argv` and dispatches to one of the commands below. Returns the
// process exit code: 2 for usage and configuration errors, 1 for any other
// failure.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

int ExitCodeFor(const absl::Status& status);

struct SimulateOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<uint64_t> seed;
  std::optional<int> workers;
  // Writes the inputs of this replication for every (dgp, sampling) cell
  // under `<out_dir>/export/`.
  std::optional<int> export_rep;
};

absl::Status Simulate(const SimulateOptions& options, std::ostream& log);

// Writes edges.csv, labels.csv, features.csv, labeled_dyads.csv and
// nodes.csv for one replication cell into `dir`.
absl::Status ExportReplication(const ExperimentConfig& cfg, int rep, Dgp dgp,
                               SampleLevel level, const std::string& dir);

struct ExternalInputs {
  std::string edges_path;
  std::string labels_path;
  std::string group = "a";
  std::string features_path;       // optional `node_id,x`
  std::string actions_path;        // optional `node_id,a`
  std::string labeled_dyads_path;  // optional `src,dst`
};

// External data mapped onto dense node ids. Ids sort numerically when every
// id is an integer, lexicographically otherwise.
struct ExternalData {
  std::vector<std::string> ids;  // dense id -> external id
  Graph graph;
  NodeTable nodes;  // y is 0 for unlabeled nodes
  GroundTruthMask mask;
  std::vector<double> actions;  // empty unless an actions file was given
  FeatureOptions features;
};

absl::StatusOr<ExternalData> LoadExternal(const ExternalInputs& inputs);

void WriteIdMapCsv(const ExternalData& data, std::ostream& out);

struct EstimateOptions {
  ExternalInputs inputs;
  std::string model = "both";
  std::string out_dir;  // optional
};

struct EstimateRow {
  ModelKind model = ModelKind::kNoModel;
  double h_hat = 0.0;
  ColemanResult coleman;
  std::string flag;
};

absl::StatusOr<std::vector<EstimateRow>> EstimateRows(
    const ExternalData& data, const std::vector<ModelKind>& models);

absl::Status Estimate(const EstimateOptions& options, std::ostream& out);

struct DiagnoseOptions {
  ExternalInputs inputs;
  std::string model = "ego_alter";
  int folds = 5;
  int permutations = 200;
  uint64_t seed = 1;
};

absl::Status Diagnose(const DiagnoseOptions& options, std::ostream& out);

struct ReportOptions {
  std::string results_path;
  std::string out_dir;
};

absl::Status Report(const ReportOptions& options, std::ostream& log);

// Summary tables for both denominator modes, the long summary and the
// AUC-vs-bias data.
absl::Status WriteReportFiles(const std::vector<EstimateRecord>& records,
                              const std::string& out_dir);

}  // namespace homophily::cli

#endif  // HOMOPHILY_TOOLS_CLI_COMMANDS_H_
