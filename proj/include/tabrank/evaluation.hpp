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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tabrank/folds.hpp"
#include "tabrank/models.hpp"
#include "tabrank/table.hpp"

namespace tabrank {

struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const noexcept { return tp + fp + tn + fn; }
  // Counts seen from the other class's side.
  ConfusionMatrix swapped() const noexcept { return {tn, fn, tp, fp}; }
  bool operator==(const ConfusionMatrix&) const = default;
};

// A row is predicted positive iff score >= threshold. Throws LengthMismatch.
ConfusionMatrix confusion(std::span<const double> scores, std::span<const std::int32_t> labels,
                          std::int32_t positive, double threshold);

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  // Set when the matching ratio had a zero denominator and was reported as 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
  bool accuracy_undefined = false;
};

Metrics metrics(const ConfusionMatrix& conf);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) first, (1,1) last
};

struct RocResult {
  RocCurve curve;
  double auc = 0.0;
};

// Threshold sweep over distinct scores in descending order. Tied scores form
// one diagonal step, so the trapezoidal area equals the pair-count AUC with
// half credit for ties. Throws SingleClassLabels unless both classes appear.
RocResult roc_auc(std::span<const double> scores, std::span<const std::int32_t> labels, std::int32_t positive);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for a single value
  std::size_t count = 0;
};

MeanSd mean_sd(std::span<const double> values);

struct ScoredMetrics {
  double auc = 0.0;
  ConfusionMatrix confusion;
  Metrics metrics;
};

struct FoldResult {
  std::size_t fold = 0;
  std::size_t n_test = 0;
  std::optional<double> auc;  // empty when the test fold holds one class
  ConfusionMatrix confusion;
  Metrics metrics;
};

struct ModelReport {
  ModelSpec spec;
  ScoredMetrics pooled;          // designated positive class
  ScoredMetrics pooled_reverse;  // the other class as positive
  std::vector<FoldResult> folds;
  MeanSd fold_auc, fold_precision, fold_recall, fold_f1, fold_accuracy;
  std::vector<double> out_of_fold_scores;  // table row order
};

struct EvalReport {
  std::string positive_class;
  std::string negative_class;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  std::size_t n_rows = 0;
  std::vector<ModelReport> models;
};

struct CvOptions {
  std::size_t k = 10;
  std::uint64_t seed = 0;
  std::string positive = "yes";
  double threshold = 0.5;
  // Called from the fold workers with the exact table used to fit
  // normalization and train models, and with the table that gets scored.
  std::function<void(std::size_t fold, const DataTable& fit_rows)> on_fit;
  std::function<void(std::size_t fold, const DataTable& test_rows)> on_score;
};

// Stratified k-fold evaluation. Per fold, min-max normalization and every
// model are fitted on the training rows only; the held-out rows are scored
// and pooled in row order for the headline metrics. Model seeds are derived
// from (spec.seed, fold). Throws SingleClassTraining when the target holds a
// single class.
EvalReport evaluate_cv(const DataTable& table, std::span<const ModelSpec> specs, const CvOptions& options);

}  // namespace tabrank
