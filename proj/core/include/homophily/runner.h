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

#ifndef HOMOPHILY_RUNNER_H_
#define HOMOPHILY_RUNNER_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "homophily/estimators.h"
#include "homophily/graph.h"
#include "homophily/metrics.h"
#include "homophily/sampling.h"
#include "homophily/simgen.h"

namespace homophily {

struct ExperimentConfig {
  int32_t n_nodes = 4000;
  int32_t links_per_node = 5;
  double exponent = 0.8;
  double node_fraction = 0.20;
  double edge_fraction = 0.025;
  // Expected sample sizes for the biased designs; default to the random
  // designs' counts.
  std::optional<double> node_target_count;
  std::optional<double> edge_target_count;
  int replications = 500;
  uint64_t base_seed = 20190101;
  std::vector<Dgp> dgps = {std::begin(kAllDgps), std::end(kAllDgps)};
  std::vector<SampleLevel> samplings = {SampleLevel::kEdge,
                                        SampleLevel::kNode};
  std::vector<ModelKind> models = {std::begin(kAllModelKinds),
                                   std::end(kAllModelKinds)};
  std::vector<DenominatorMode> denominator_modes = {DenominatorMode::kOracle,
                                                    DenominatorMode::kPlugIn};
  int workers = 0;  // 0: hardware concurrency
  OutcomeParams outcome;
  BiasedSamplingCoefs biased;

  absl::Status Validate() const;
};

// Parses a YAML mapping of the fields above. Unknown keys are rejected with
// an error naming the key.
absl::StatusOr<ExperimentConfig> ParseConfig(absl::string_view text);
absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path);

// Everything one (replication, dgp, sampling level) cell generated. Exposed
// so callers can export the exact data a battery saw.
struct ReplicationData {
  Graph graph;
  NodeTable nodes;
  GroundTruthMask mask;
  SampleMode mode = SampleMode::kRandom;
  std::string sampling;
};

absl::StatusOr<Graph> ReplicationGraph(const ExperimentConfig& cfg, int rep);
absl::StatusOr<NodeTable> ReplicationNodes(const ExperimentConfig& cfg,
                                           int rep, Dgp dgp,
                                           const Graph& graph);
absl::StatusOr<ReplicationData> MakeReplicationData(const ExperimentConfig& cfg,
                                                    int rep, Dgp dgp,
                                                    SampleLevel level);

// All records of one replication, in canonical order.
std::vector<EstimateRecord> RunReplication(const ExperimentConfig& cfg,
                                           int rep);

struct BatteryResult {
  std::vector<EstimateRecord> records;
  std::vector<SummaryCell> summary;
  size_t failed_records = 0;
};

// Replications run in parallel; the output depends only on `cfg`.
absl::StatusOr<BatteryResult> RunBattery(const ExperimentConfig& cfg);

// `rep,dgp,sampling,model,denominator_mode,H_true,H_hat,rel_bias,node_auc,
//  node_accuracy,n_labeled_nodes,n_labeled_dyads,flag`
void WriteResultsCsv(const std::vector<EstimateRecord>& records,
                     std::ostream& out);
absl::StatusOr<std::vector<EstimateRecord>> ReadResultsCsv(std::istream& in);

}  // namespace homophily

#endif  // HOMOPHILY_RUNNER_H_
