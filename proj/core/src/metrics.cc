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

#include "homophily/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/match.h"
#include "absl/strings/str_format.h"
#include "homophily/simgen.h"

namespace homophily {
namespace {

int DgpOrder(absl::string_view dgp) {
  absl::StatusOr<Dgp> d = ParseDgp(dgp);
  if (!d.ok()) return 100;
  int i = 0;
  for (Dgp x : kAllDgps) {
    if (x == *d) return i;
    ++i;
  }
  return 100;
}

int SamplingOrder(absl::string_view sampling) {
  // Edge-level designs first.
  return absl::EndsWith(sampling, "edge") ? 0 : 1;
}

double MetricValue(const SummaryCell& c, TableMetric metric) {
  return metric == TableMetric::kBias ? std::abs(c.bias) : c.mae;
}

}  // namespace

absl::StatusOr<BiasMae> BiasAndMae(std::span<const EstimateRecord> records) {
  if (records.empty()) {
    return absl::InvalidArgumentError("no records to summarize");
  }
  BiasMae out;
  for (const EstimateRecord& r : records) {
    const double rel = (r.h_hat - r.h_true) / r.h_true;
    out.bias += rel;
    out.mae += std::abs(rel);
  }
  out.bias /= static_cast<double>(records.size());
  out.mae /= static_cast<double>(records.size());
  return out;
}

absl::StatusOr<double> Auc(std::span<const double> scores,
                           std::span<const uint8_t> labels) {
  if (scores.size() != labels.size()) {
    return absl::InvalidArgumentError("scores and labels differ in length");
  }
  const size_t n = scores.size();
  const size_t pos = std::count(labels.begin(), labels.end(), uint8_t{1});
  const size_t neg = n - pos;
  if (pos == 0 || neg == 0) {
    return absl::FailedPreconditionError(
        "AUC needs both classes among the evaluated nodes");
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  for (size_t lo = 0; lo < n;) {
    size_t hi = lo;
    while (hi + 1 < n && scores[order[hi + 1]] == scores[order[lo]]) ++hi;
    const double midrank = 0.5 * static_cast<double>(lo + hi) + 1.0;
    for (size_t k = lo; k <= hi; ++k) {
      if (labels[order[k]]) rank_sum += midrank;
    }
    lo = hi + 1;
  }
  const double p = static_cast<double>(pos);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

absl::StatusOr<NodeMetrics> NodeLevelMetrics(std::span<const double> probs,
                                             std::span<const uint8_t> labels) {
  absl::StatusOr<double> auc = Auc(probs, labels);
  if (!auc.ok()) return auc.status();
  NodeMetrics m;
  m.auc = *auc;
  size_t correct = 0;
  for (size_t i = 0; i < probs.size(); ++i) {
    const uint8_t predicted = probs[i] >= 0.5 ? 1 : 0;
    if (predicted == labels[i]) ++correct;
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(probs.size());
  return m;
}

bool SummaryRowLess(absl::string_view sampling_a, absl::string_view dgp_a,
                    absl::string_view sampling_b, absl::string_view dgp_b) {
  return std::make_tuple(SamplingOrder(sampling_a), DgpOrder(dgp_a),
                         sampling_a, dgp_a) <
         std::make_tuple(SamplingOrder(sampling_b), DgpOrder(dgp_b),
                         sampling_b, dgp_b);
}

std::vector<SummaryCell> Summarize(std::span<const EstimateRecord> records) {
  using GroupKey = std::tuple<std::string, std::string, int>;
  std::map<GroupKey, std::set<int>> failed_reps;
  for (const EstimateRecord& r : records) {
    if (r.failed()) {
      failed_reps[{r.sampling, r.dgp, static_cast<int>(r.denominator_mode)}]
          .insert(r.rep);
    }
  }

  struct Acc {
    std::vector<const EstimateRecord*> kept;
    std::set<int> excluded;
  };
  using CellKey = std::tuple<std::string, std::string, int, int>;
  std::map<CellKey, Acc> cells;
  for (const EstimateRecord& r : records) {
    const int mode = static_cast<int>(r.denominator_mode);
    Acc& acc = cells[{r.sampling, r.dgp, static_cast<int>(r.model), mode}];
    const auto it = failed_reps.find({r.sampling, r.dgp, mode});
    if (it != failed_reps.end() && it->second.count(r.rep)) {
      acc.excluded.insert(r.rep);
    } else {
      acc.kept.push_back(&r);
    }
  }

  std::vector<SummaryCell> out;
  for (const auto& [key, acc] : cells) {
    SummaryCell c;
    c.sampling = std::get<0>(key);
    c.dgp = std::get<1>(key);
    c.model = static_cast<ModelKind>(std::get<2>(key));
    c.denominator_mode = static_cast<DenominatorMode>(std::get<3>(key));
    c.replications = acc.kept.size();
    c.excluded = acc.excluded.size();
    if (!acc.kept.empty()) {
      double bias = 0.0, mae = 0.0, auc = 0.0, acc_sum = 0.0;
      size_t n_auc = 0, flagged = 0;
      for (const EstimateRecord* r : acc.kept) {
        bias += r->relative_error;
        mae += std::abs(r->relative_error);
        if (r->node_auc.has_value()) {
          auc += *r->node_auc;
          acc_sum += r->node_accuracy.value_or(0.0);
          ++n_auc;
        }
        if (r->flag != "ok") ++flagged;
      }
      const double n = static_cast<double>(acc.kept.size());
      c.bias = bias / n;
      c.mae = mae / n;
      if (n_auc > 0) {
        c.mean_auc = auc / static_cast<double>(n_auc);
        c.mean_accuracy = acc_sum / static_cast<double>(n_auc);
      }
      c.flagged_fraction = static_cast<double>(flagged) / n;
    } else {
      c.bias = c.mae = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SummaryCell& a, const SummaryCell& b) {
                     if (a.sampling != b.sampling || a.dgp != b.dgp) {
                       return SummaryRowLess(a.sampling, a.dgp, b.sampling,
                                             b.dgp);
                     }
                     return std::make_tuple(
                                static_cast<int>(a.denominator_mode),
                                static_cast<int>(a.model)) <
                            std::make_tuple(
                                static_cast<int>(b.denominator_mode),
                                static_cast<int>(b.model));
                   });
  return out;
}

std::vector<ModelKind> BestModels(std::span<const SummaryCell> row,
                                  TableMetric metric) {
  double best = std::numeric_limits<double>::infinity();
  for (const SummaryCell& c : row) {
    if (c.replications > 0) best = std::min(best, MetricValue(c, metric));
  }
  std::vector<ModelKind> out;
  for (const SummaryCell& c : row) {
    if (c.replications > 0 && MetricValue(c, metric) <= best + 1e-12) {
      out.push_back(c.model);
    }
  }
  return out;
}

void WriteSummaryTableCsv(std::span<const SummaryCell> summary,
                          TableMetric metric, DenominatorMode mode,
                          std::ostream& out) {
  std::vector<ModelKind> models;
  for (ModelKind k : kAllModelKinds) {
    for (const SummaryCell& c : summary) {
      if (c.model == k && c.denominator_mode == mode) {
        models.push_back(k);
        break;
      }
    }
  }
  out << "sampling,dgp";
  for (ModelKind k : models) out << ',' << ModelKindName(k);
  out << '\n';

  // `summary` is sorted by row already; walk contiguous row groups.
  size_t i = 0;
  while (i < summary.size()) {
    size_t j = i;
    std::vector<SummaryCell> row;
    while (j < summary.size() && summary[j].sampling == summary[i].sampling &&
           summary[j].dgp == summary[i].dgp) {
      if (summary[j].denominator_mode == mode) row.push_back(summary[j]);
      ++j;
    }
    if (!row.empty()) {
      const std::vector<ModelKind> best = BestModels(row, metric);
      out << summary[i].sampling << ',' << summary[i].dgp;
      for (ModelKind k : models) {
        out << ',';
        auto it = std::find_if(row.begin(), row.end(),
                               [&](const SummaryCell& c) { return c.model == k; });
        if (it == row.end() || it->replications == 0) continue;
        const double v = metric == TableMetric::kBias ? it->bias : it->mae;
        out << absl::StrFormat("%.4f", v);
        if (std::find(best.begin(), best.end(), k) != best.end()) out << '*';
      }
      out << '\n';
    }
    i = j;
  }
}

void WriteSummaryCsv(std::span<const SummaryCell> summary, std::ostream& out) {
  out << "sampling,dgp,model,denominator_mode,replications,excluded,bias,mae,"
         "mean_auc,mean_accuracy,flagged_fraction\n";
  for (const SummaryCell& c : summary) {
    out << absl::StrFormat(
        "%s,%s,%s,%s,%d,%d,%.10g,%.10g,%s,%s,%.6g\n", c.sampling, c.dgp,
        ModelKindName(c.model), DenominatorModeName(c.denominator_mode),
        c.replications, c.excluded, c.bias, c.mae,
        c.mean_auc ? absl::StrFormat("%.10g", *c.mean_auc) : "",
        c.mean_accuracy ? absl::StrFormat("%.10g", *c.mean_accuracy) : "",
        c.flagged_fraction);
  }
}

void WriteAucVsBiasCsv(std::span<const SummaryCell> summary,
                       std::ostream& out) {
  out << "sampling,dgp,model,denominator_mode,mean_auc,mean_accuracy,bias,"
         "mae\n";
  for (const SummaryCell& c : summary) {
    if (!c.mean_auc.has_value()) continue;
    out << absl::StrFormat("%s,%s,%s,%s,%.10g,%.10g,%.10g,%.10g\n", c.sampling,
                           c.dgp, ModelKindName(c.model),
                           DenominatorModeName(c.denominator_mode),
                           *c.mean_auc, c.mean_accuracy.value_or(0.0), c.bias,
                           c.mae);
  }
}

}  // namespace homophily
