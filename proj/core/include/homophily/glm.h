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

#ifndef HOMOPHILY_GLM_H_
#define HOMOPHILY_GLM_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace homophily {

// Identifies the node (alter < 0) or directed dyad a design row came from.
struct RowKey {
  int32_t ego = 0;
  int32_t alter = -1;
};

// Dense row-major design. The first column is conventionally the intercept.
class DesignMatrix {
 public:
  DesignMatrix() = default;
  explicit DesignMatrix(std::vector<std::string> col_names)
      : col_names_(std::move(col_names)) {}

  void Reserve(size_t rows) {
    data_.reserve(rows * cols());
    keys_.reserve(rows);
  }
  void AddRow(std::span<const double> values, RowKey key = {});

  size_t rows() const { return keys_.size(); }
  size_t cols() const { return col_names_.size(); }
  std::span<const std::string> col_names() const { return col_names_; }
  std::span<const RowKey> row_keys() const { return keys_; }

  std::span<const double> row(size_t r) const {
    return {data_.data() + r * cols(), cols()};
  }
  double at(size_t r, size_t c) const { return data_[r * cols() + c]; }

  // Rows `selected`, in the given order.
  DesignMatrix Subset(std::span<const size_t> selected) const;

  // Returns a non-OK status if any entry is not finite.
  absl::Status Validate() const;

 private:
  std::vector<std::string> col_names_;
  std::vector<double> data_;
  std::vector<RowKey> keys_;
};

struct FitOptions {
  int max_iterations = 100;
  double tolerance = 1e-8;        // on max |delta beta|
  int max_step_halvings = 20;
  double separation_bound = 30.0; // |beta|_inf above this means separation
  double ridge_lambda = 1e-4;
  bool allow_ridge_fallback = true;
};

struct FittedModel {
  std::vector<std::string> col_names;
  std::vector<double> beta;
  bool converged = false;
  int iterations = 0;
  bool ridge_used = false;
  double ridge_lambda = 0.0;
  // Log-likelihood after each accepted iteration (penalized when ridge_used).
  std::vector<double> log_likelihood;
  std::vector<double> fitted;
  std::vector<double> residual;
};

// Maximum-likelihood binary logistic regression by IRLS with step halving.
// Falls back to a ridge-penalized refit (flagged via ridge_used) when the
// unpenalized fit does not converge or shows separation.
absl::StatusOr<FittedModel> FitLogistic(const DesignMatrix& x,
                                        std::span<const uint8_t> y,
                                        const FitOptions& options = {});

absl::StatusOr<std::vector<double>> Predict(const FittedModel& model,
                                            const DesignMatrix& x);

// `feature,beta`.
void WriteCoefficientsCsv(const FittedModel& model, std::ostream& out);

}  // namespace homophily

#endif  // HOMOPHILY_GLM_H_
