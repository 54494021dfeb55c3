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

#include "tabrank/linear_models.hpp"

#include <algorithm>
#include <cmath>

#include "model_internal.hpp"
#include "tabrank/error.hpp"

namespace tabrank {

double sigmoid(double z) noexcept {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) noexcept { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

DesignLayout::DesignLayout(const FeatureSchema& schema) {
  for (const FeatureInfo& f : schema.features) {
    offsets_.push_back(width_);
    const bool numeric = f.kind == ColumnKind::kNumeric;
    numeric_.push_back(numeric ? 1 : 0);
    widths_.push_back(numeric ? 1 : f.levels.size());
    width_ += widths_.back();
  }
}

void DesignLayout::expand(std::span<const double> encoded_row, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t f = 0; f < offsets_.size(); ++f) {
    const double v = encoded_row[f];
    if (numeric_[f]) {
      out[offsets_[f]] = v;
    } else if (v >= 0 && v < static_cast<double>(widths_[f])) {
      out[offsets_[f] + static_cast<std::size_t>(v)] = 1.0;
    }
  }
}

DesignMatrix expand_rows(const DesignLayout& layout, const EncodedRows& rows) {
  DesignMatrix x;
  x.n_rows = rows.n_rows;
  x.n_cols = layout.width();
  x.values.assign(x.n_rows * x.n_cols, 0.0);
  for (std::size_t r = 0; r < rows.n_rows; ++r) {
    layout.expand(rows.row(r), std::span<double>(x.values.data() + r * x.n_cols, x.n_cols));
  }
  return x;
}

double logistic_objective(const DesignMatrix& x, std::span<const std::uint8_t> y,
                          std::span<const double> weights, double bias, double lambda) {
  double loss = 0.0;
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    const double z = dot(weights, x.row(r)) + bias;
    loss += softplus(z) - (y[r] ? z : 0.0);
  }
  loss /= static_cast<double>(x.n_rows);
  return loss + 0.5 * lambda * dot(weights, weights);
}

void logistic_gradient(const DesignMatrix& x, std::span<const std::uint8_t> y,
                       std::span<const double> weights, double bias, double lambda,
                       std::span<double> grad_w, double& grad_b) {
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0.0;
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    const auto row = x.row(r);
    const double residual = sigmoid(dot(weights, row) + bias) - (y[r] ? 1.0 : 0.0);
    for (std::size_t j = 0; j < x.n_cols; ++j) grad_w[j] += residual * row[j];
    grad_b += residual;
  }
  const double inv_n = 1.0 / static_cast<double>(x.n_rows);
  for (std::size_t j = 0; j < x.n_cols; ++j) grad_w[j] = grad_w[j] * inv_n + lambda * weights[j];
  grad_b *= inv_n;
}

LogisticFit fit_logistic(const DesignMatrix& x, std::span<const std::uint8_t> y, double lambda,
                         double learning_rate, std::size_t max_epochs, double tolerance) {
  LogisticFit fit;
  fit.weights.assign(x.n_cols, 0.0);
  std::vector<double> grad(x.n_cols);
  double grad_b = 0.0;
  for (std::size_t epoch = 0; epoch < max_epochs; ++epoch) {
    fit.loss_history.push_back(logistic_objective(x, y, fit.weights, fit.bias, lambda));
    logistic_gradient(x, y, fit.weights, fit.bias, lambda, grad, grad_b);
    double norm_inf = std::abs(grad_b);
    for (double g : grad) norm_inf = std::max(norm_inf, std::abs(g));
    if (norm_inf < tolerance) break;
    for (std::size_t j = 0; j < x.n_cols; ++j) fit.weights[j] -= learning_rate * grad[j];
    fit.bias -= learning_rate * grad_b;
    fit.epochs = epoch + 1;
  }
  return fit;
}

SvmFit fit_linear_svm(const DesignMatrix& x, std::span<const std::uint8_t> y, double lambda,
                      std::size_t epochs) {
  const std::size_t p = x.n_cols;
  // The bias rides along as weight p on a constant input of 1.
  std::vector<double> w(p + 1, 0.0);
  std::vector<double> avg(p + 1, 0.0);
  std::vector<double> grad(p + 1);
  const double radius = 1.0 / std::sqrt(lambda);
  const double inv_n = 1.0 / static_cast<double>(x.n_rows);
  const std::size_t average_from = epochs / 2 + 1;
  std::size_t averaged = 0;
  for (std::size_t t = 1; t <= epochs; ++t) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t r = 0; r < x.n_rows; ++r) {
      const auto row = x.row(r);
      const double label = y[r] ? 1.0 : -1.0;
      double margin = w[p];
      for (std::size_t j = 0; j < p; ++j) margin += w[j] * row[j];
      if (label * margin < 1.0) {
        for (std::size_t j = 0; j < p; ++j) grad[j] -= label * row[j];
        grad[p] -= label;
      }
    }
    const double step = 1.0 / (lambda * static_cast<double>(t));
    double norm2 = 0.0;
    for (std::size_t j = 0; j <= p; ++j) {
      w[j] -= step * (lambda * w[j] + grad[j] * inv_n);
      norm2 += w[j] * w[j];
    }
    const double norm = std::sqrt(norm2);
    if (norm > radius) {
      for (double& wj : w) wj *= radius / norm;
    }
    if (t >= average_from) {
      ++averaged;
      for (std::size_t j = 0; j <= p; ++j) avg[j] += (w[j] - avg[j]) / static_cast<double>(averaged);
    }
  }
  SvmFit fit;
  fit.bias = avg[p];
  avg.pop_back();
  fit.weights = std::move(avg);
  return fit;
}

double fit_calibration_slope(std::span<const double> margins, std::span<const std::uint8_t> y) {
  double max_abs = 0.0;
  for (double m : margins) max_abs = std::max(max_abs, std::abs(m));
  constexpr double kMinSlope = 1e-6;
  if (max_abs == 0.0) return 1.0;
  const double max_slope = std::max(kMinSlope, 30.0 / max_abs);
  // d/da of the summed log-loss; increasing in a because the loss is convex.
  const auto derivative = [&](double a) {
    double d = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) d += (sigmoid(a * margins[i]) - (y[i] ? 1.0 : 0.0)) * margins[i];
    return d;
  };
  if (derivative(kMinSlope) >= 0.0) return kMinSlope;
  if (derivative(max_slope) <= 0.0) return max_slope;
  double lo = std::log(kMinSlope);
  double hi = std::log(max_slope);
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (derivative(std::exp(mid)) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

namespace {

struct LinearData {
  detail::TrainingData data;
  DesignMatrix x;
};

LinearData prepare_linear(const DataTable& train, const ModelSpec& spec, std::string_view positive) {
  validate(spec);
  LinearData out{detail::prepare_training(train, positive, true, spec.algorithm), {}};
  out.x = expand_rows(DesignLayout(out.data.schema), out.data.x);
  return out;
}

}  // namespace

TrainedModel train_logistic_regression(const DataTable& train, const ModelSpec& spec,
                                       std::string_view positive) {
  if (spec.algorithm != Algorithm::kLogisticRegression) {
    throw Error(ErrorCode::kInvalidSpec, "spec is not logistic regression");
  }
  const LinearData lin = prepare_linear(train, spec, positive);
  const LogisticFit fit = fit_logistic(lin.x, lin.data.target.is_positive, spec.param("lambda"),
                                       spec.param("learning_rate"),
                                       static_cast<std::size_t>(spec.param("max_epochs")), spec.param("tolerance"));
  TrainedModel model = detail::make_model(spec, lin.data);
  model.params = LinearModel{fit.weights, fit.bias, 1.0};
  return model;
}

TrainedModel train_linear_svm(const DataTable& train, const ModelSpec& spec, std::string_view positive) {
  if (spec.algorithm != Algorithm::kLinearSvm) throw Error(ErrorCode::kInvalidSpec, "spec is not a linear svm");
  const LinearData lin = prepare_linear(train, spec, positive);
  const SvmFit fit = fit_linear_svm(lin.x, lin.data.target.is_positive, spec.param("lambda"),
                                    static_cast<std::size_t>(spec.param("epochs")));
  std::vector<double> margins(lin.x.n_rows);
  for (std::size_t r = 0; r < lin.x.n_rows; ++r) margins[r] = dot(fit.weights, lin.x.row(r)) + fit.bias;
  TrainedModel model = detail::make_model(spec, lin.data);
  model.params = LinearModel{fit.weights, fit.bias, fit_calibration_slope(margins, lin.data.target.is_positive)};
  return model;
}

}  // namespace tabrank
