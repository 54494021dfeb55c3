/*
 * Copyright 2026 The tabrank Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tabrank/models.hpp"

namespace tabrank {

// One-hot expansion of a FeatureSchema: numeric features take one column,
// categorical features one column per schema level. Unseen levels expand to
// all zeros.
class DesignLayout {
 public:
  explicit DesignLayout(const FeatureSchema& schema);

  std::size_t width() const noexcept { return width_; }
  void expand(std::span<const double> encoded_row, std::span<double> out) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> widths_;
  std::vector<std::uint8_t> numeric_;
  std::size_t width_ = 0;
};

struct DesignMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> values;  // row-major

  std::span<const double> row(std::size_t r) const { return {values.data() + r * n_cols, n_cols}; }
};

DesignMatrix expand_rows(const DesignLayout& layout, const EncodedRows& rows);

// Mean log-loss plus lambda/2 * ||w||^2 (bias unpenalized). Labels are 0/1.
double logistic_objective(const DesignMatrix& x, std::span<const std::uint8_t> y,
                          std::span<const double> weights, double bias, double lambda);

// Analytic gradient of logistic_objective. grad_w must have x.n_cols entries.
void logistic_gradient(const DesignMatrix& x, std::span<const std::uint8_t> y,
                       std::span<const double> weights, double bias, double lambda,
                       std::span<double> grad_w, double& grad_b);

struct LogisticFit {
  std::vector<double> weights;
  double bias = 0.0;
  std::size_t epochs = 0;
  std::vector<double> loss_history;  // objective before each update
};

// Full-batch gradient descent from zero weights.
LogisticFit fit_logistic(const DesignMatrix& x, std::span<const std::uint8_t> y, double lambda,
                         double learning_rate, std::size_t max_epochs, double tolerance);

struct SvmFit {
  std::vector<double> weights;
  double bias = 0.0;
};

// Hinge loss + lambda/2 * ||(w, b)||^2 by full-batch subgradient steps of size
// 1/(lambda t), projected onto the ball of radius 1/sqrt(lambda). Returns the
// average of the iterates from the second half of the run.
SvmFit fit_linear_svm(const DesignMatrix& x, std::span<const std::uint8_t> y, double lambda,
                      std::size_t epochs);

// Slope a > 0 minimizing the log-loss of sigmoid(a * margin). The slope is
// capped so that a * max|margin| <= 30, which keeps calibrated scores distinct.
double fit_calibration_slope(std::span<const double> margins, std::span<const std::uint8_t> y);

double sigmoid(double z) noexcept;

}  // namespace tabrank
