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

#include "homophily/glm.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "homophily/numeric.h"

namespace homophily {
namespace {

using RowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowMajorMap = Eigen::Map<const RowMajor>;

// Log of the Bernoulli likelihood computed from the linear predictor, stable
// for large |eta|.
double LogLikelihood(const Eigen::VectorXd& eta, std::span<const uint8_t> y) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double e = eta[i];
    // log(1 + exp(e))
    const double softplus =
        e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
    ll += (y[i] ? e : 0.0) - softplus;
  }
  return ll;
}

struct IrlsResult {
  Eigen::VectorXd beta;
  bool converged = false;
  bool singular = false;
  int iterations = 0;
  std::vector<double> trace;
};

// `penalty` is applied to every coefficient except the intercept (column 0).
IrlsResult RunIrls(const ConstRowMajorMap& x, std::span<const uint8_t> y,
                   double penalty, const FitOptions& opt) {
  const Eigen::Index p = x.cols();
  IrlsResult res;
  res.beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd pen = Eigen::VectorXd::Constant(p, penalty);
  pen[0] = 0.0;

  auto objective = [&](const Eigen::VectorXd& b) {
    const Eigen::VectorXd eta = x * b;
    return LogLikelihood(eta, y) - 0.5 * (pen.array() * b.array().square()).sum();
  };

  double current = objective(res.beta);
  Eigen::VectorXd mu(x.rows());
  Eigen::VectorXd w(x.rows());
  for (int iter = 1; iter <= opt.max_iterations; ++iter) {
    const Eigen::VectorXd eta = x * res.beta;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      mu[i] = Logistic(eta[i]);
      w[i] = mu[i] * (1.0 - mu[i]);
    }
    Eigen::VectorXd resid(x.rows());
    for (Eigen::Index i = 0; i < resid.size(); ++i) resid[i] = y[i] - mu[i];

    Eigen::MatrixXd info = x.transpose() * w.asDiagonal() * x;
    info.diagonal() += pen;
    const Eigen::VectorXd score =
        x.transpose() * resid - (pen.array() * res.beta.array()).matrix();

    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().minCoeff() <= 1e-14 * ldlt.vectorD().maxCoeff()) {
      res.singular = true;
      res.iterations = iter;
      return res;
    }
    Eigen::VectorXd step = ldlt.solve(score);
    if (!step.allFinite()) {
      res.singular = true;
      res.iterations = iter;
      return res;
    }

    Eigen::VectorXd next = res.beta + step;
    double next_obj = objective(next);
    for (int h = 0; h < opt.max_step_halvings && !(next_obj >= current); ++h) {
      step *= 0.5;
      next = res.beta + step;
      next_obj = objective(next);
    }
    res.iterations = iter;
    if (!(next_obj >= current)) {
      // No ascent direction left within the halving budget.
      res.converged = step.cwiseAbs().maxCoeff() < opt.tolerance;
      res.trace.push_back(current);
      return res;
    }
    res.beta = next;
    current = next_obj;
    res.trace.push_back(current);
    if (step.cwiseAbs().maxCoeff() < opt.tolerance) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace

void DesignMatrix::AddRow(std::span<const double> values, RowKey key) {
  data_.insert(data_.end(), values.begin(), values.end());
  keys_.push_back(key);
}

DesignMatrix DesignMatrix::Subset(std::span<const size_t> selected) const {
  DesignMatrix out(col_names_);
  out.Reserve(selected.size());
  for (size_t r : selected) out.AddRow(row(r), keys_[r]);
  return out;
}

absl::Status DesignMatrix::Validate() const {
  if (data_.size() != rows() * cols()) {
    return absl::InternalError("design rows have inconsistent widths");
  }
  for (size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "design entry (%d, %s) is not finite", i / cols(),
          col_names_[i % cols()]));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<FittedModel> FitLogistic(const DesignMatrix& x,
                                        std::span<const uint8_t> y,
                                        const FitOptions& options) {
  if (x.cols() == 0) {
    return absl::InvalidArgumentError("design has no columns");
  }
  if (y.size() != x.rows()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "label count %d does not match design rows %d", y.size(), x.rows()));
  }
  if (x.rows() < x.cols()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "design has fewer rows (%d) than columns (%d)", x.rows(), x.cols()));
  }
  if (absl::Status s = x.Validate(); !s.ok()) return s;
  const size_t positives = std::count(y.begin(), y.end(), uint8_t{1});
  if (positives == 0 || positives == y.size()) {
    return absl::FailedPreconditionError(
        "degenerate labels: training data contains a single class");
  }

  ConstRowMajorMap map(x.row(0).data(), x.rows(), x.cols());

  IrlsResult res = RunIrls(map, y, 0.0, options);
  bool ridge = false;
  const bool separated =
      !res.singular && res.beta.cwiseAbs().maxCoeff() > options.separation_bound;
  if (res.singular || !res.converged || separated) {
    if (!options.allow_ridge_fallback) {
      if (res.singular) {
        return absl::InternalError(
            "singular weighted normal equations in logistic fit");
      }
    } else {
      // Penalty scales with the sample so lambda acts on the mean
      // log-likelihood.
      IrlsResult ridged = RunIrls(
          map, y, options.ridge_lambda * static_cast<double>(x.rows()),
          options);
      if (ridged.singular) {
        return absl::InternalError(
            "singular weighted normal equations in logistic fit, even with "
            "ridge penalty");
      }
      res = std::move(ridged);
      ridge = true;
    }
  }

  FittedModel model;
  model.col_names.assign(x.col_names().begin(), x.col_names().end());
  model.beta.assign(res.beta.data(), res.beta.data() + res.beta.size());
  model.converged = res.converged;
  model.iterations = res.iterations;
  model.ridge_used = ridge;
  model.ridge_lambda = ridge ? options.ridge_lambda : 0.0;
  model.log_likelihood = std::move(res.trace);
  const Eigen::VectorXd eta = map * res.beta;
  model.fitted.resize(x.rows());
  model.residual.resize(x.rows());
  for (size_t i = 0; i < x.rows(); ++i) {
    model.fitted[i] = Logistic(eta[i]);
    model.residual[i] = y[i] - model.fitted[i];
  }
  return model;
}

absl::StatusOr<std::vector<double>> Predict(const FittedModel& model,
                                            const DesignMatrix& x) {
  if (x.cols() != model.beta.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "design has %d columns but the model has %d coefficients", x.cols(),
        model.beta.size()));
  }
  for (size_t c = 0; c < x.cols(); ++c) {
    if (!model.col_names.empty() && x.col_names()[c] != model.col_names[c]) {
      return absl::InvalidArgumentError(
          absl::StrFormat("column %d is '%s' but the model expects '%s'", c,
                          x.col_names()[c], model.col_names[c]));
    }
  }
  std::vector<double> out(x.rows());
  if (x.rows() == 0) return out;
  ConstRowMajorMap map(x.row(0).data(), x.rows(), x.cols());
  Eigen::Map<const Eigen::VectorXd> beta(model.beta.data(), model.beta.size());
  const Eigen::VectorXd eta = map * beta;
  for (size_t i = 0; i < x.rows(); ++i) out[i] = Logistic(eta[i]);
  return out;
}

void WriteCoefficientsCsv(const FittedModel& model, std::ostream& out) {
  out << "feature,beta\n";
  for (size_t c = 0; c < model.beta.size(); ++c) {
    out << absl::StrFormat("%s,%.17g\n", model.col_names[c], model.beta[c]);
  }
}

}  // namespace homophily
