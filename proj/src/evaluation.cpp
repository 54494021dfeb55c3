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

#include "tabrank/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <future>
#include <numeric>

#include "tabrank/error.hpp"
#include "tabrank/preprocess.hpp"
#include "tabrank/rng.hpp"

namespace tabrank {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kLengthMismatch,
                "score and label counts differ (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

double ratio(std::int64_t num, std::int64_t den, bool& undefined) {
  undefined = den == 0;
  return undefined ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix confusion(std::span<const double> scores, std::span<const std::int32_t> labels,
                          std::int32_t positive, double threshold) {
  check_lengths(scores.size(), labels.size());
  ConfusionMatrix c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    const bool actual = labels[i] == positive;
    if (predicted && actual) ++c.tp;
    else if (predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

Metrics metrics(const ConfusionMatrix& conf) {
  Metrics m;
  m.precision = ratio(conf.tp, conf.tp + conf.fp, m.precision_undefined);
  m.recall = ratio(conf.tp, conf.tp + conf.fn, m.recall_undefined);
  m.accuracy = ratio(conf.tp + conf.tn, conf.total(), m.accuracy_undefined);
  const double pr = m.precision + m.recall;
  m.f1_undefined = pr == 0.0;
  m.f1 = m.f1_undefined ? 0.0 : 2.0 * m.precision * m.recall / pr;
  return m;
}

RocResult roc_auc(std::span<const double> scores, std::span<const std::int32_t> labels, std::int32_t positive) {
  check_lengths(scores.size(), labels.size());
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::int64_t pos_total = 0;
  for (std::int32_t l : labels) pos_total += l == positive ? 1 : 0;
  const auto neg_total = static_cast<std::int64_t>(labels.size()) - pos_total;
  if (pos_total == 0 || neg_total == 0) {
    throw Error(ErrorCode::kSingleClassLabels, "ROC AUC needs both classes in the labels");
  }
  RocResult out;
  out.curve.points.push_back({0.0, 0.0});
  // Twice the area in units of one (pos, neg) pair, kept integral.
  std::int64_t area2 = 0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::int64_t group_pos = 0;
    std::int64_t group_neg = 0;
    const double s = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == s; ++i) {
      if (labels[order[i]] == positive) ++group_pos;
      else ++group_neg;
    }
    area2 += group_neg * (2 * tp + group_pos);
    tp += group_pos;
    fp += group_neg;
    out.curve.points.push_back(
        {static_cast<double>(fp) / static_cast<double>(neg_total), static_cast<double>(tp) / static_cast<double>(pos_total)});
  }
  out.auc = static_cast<double>(area2) / (2.0 * static_cast<double>(pos_total) * static_cast<double>(neg_total));
  return out;
}

MeanSd mean_sd(std::span<const double> values) {
  MeanSd out;
  out.count = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

namespace {

struct FoldOutput {
  std::vector<std::vector<double>> scores;  // [model][test row]
  std::vector<std::size_t> test_rows;
};

FoldOutput run_fold(const DataTable& table, std::span<const ModelSpec> specs, const CvOptions& options,
                    const FoldPlan& plan, std::size_t fold) {
  FoldOutput out;
  out.test_rows = plan.test_rows(fold);
  const std::vector<std::size_t> train_rows = plan.train_rows(fold);
  const DataTable train = table.select_rows(train_rows);
  const DataTable test = table.select_rows(out.test_rows);
  if (options.on_fit) options.on_fit(fold, train);
  if (options.on_score) options.on_score(fold, test);

  const NormalizationMap norm = fit_minmax(train);
  const DataTable train_n = apply_minmax(train, norm);
  const DataTable test_n = apply_minmax(test, norm);
  for (const ModelSpec& base : specs) {
    ModelSpec spec = base;
    spec.seed = derive_seed(base.seed, fold);
    try {
      const TrainedModel model = train_model(train_n, spec, options.positive);
      out.scores.push_back(score_table(model, test_n));
    } catch (const Error& e) {
      throw Error(e.code(), std::string(to_string(base.algorithm)) + ": " + e.what());
    }
  }
  return out;
}

ScoredMetrics score_metrics(std::span<const double> scores, std::span<const std::int32_t> labels,
                            double threshold) {
  ScoredMetrics m;
  m.auc = roc_auc(scores, labels, 1).auc;
  m.confusion = confusion(scores, labels, 1, threshold);
  m.metrics = metrics(m.confusion);
  return m;
}

}  // namespace

EvalReport evaluate_cv(const DataTable& table, std::span<const ModelSpec> specs, const CvOptions& options) {
  if (specs.empty()) throw Error(ErrorCode::kConfig, "no models selected for evaluation");
  if (!(options.threshold > 0.0 && options.threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1)");
  }
  for (const ModelSpec& spec : specs) validate(spec);
  const BinaryTarget target = binary_target(table, options.positive);
  if (!target.has_both_classes()) {
    throw Error(ErrorCode::kSingleClassTraining,
                "target holds only class '" + (target.positives ? target.positive : target.negative) +
                    "'; training needs both classes");
  }
  std::vector<std::int32_t> labels(target.is_positive.begin(), target.is_positive.end());
  const FoldPlan plan = stratified_folds(labels, options.k, options.seed);

  std::vector<std::future<FoldOutput>> pending;
  for (std::size_t f = 0; f < options.k; ++f) {
    pending.push_back(std::async(std::launch::async, [&, f] { return run_fold(table, specs, options, plan, f); }));
  }
  std::vector<FoldOutput> folds;
  std::exception_ptr failure;
  for (auto& p : pending) {
    try {
      folds.push_back(p.get());
    } catch (...) {
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  EvalReport report;
  report.positive_class = target.positive;
  report.negative_class = target.negative;
  report.k = options.k;
  report.seed = options.seed;
  report.threshold = options.threshold;
  report.n_rows = table.n_rows();

  std::vector<std::int32_t> reverse_labels(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) reverse_labels[i] = 1 - labels[i];

  for (std::size_t m = 0; m < specs.size(); ++m) {
    ModelReport mr;
    mr.spec = specs[m];
    mr.out_of_fold_scores.assign(table.n_rows(), 0.0);
    std::vector<double> aucs, precisions, recalls, f1s, accuracies;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const FoldOutput& fo = folds[f];
      std::vector<std::int32_t> fold_labels;
      for (std::size_t i = 0; i < fo.test_rows.size(); ++i) {
        mr.out_of_fold_scores[fo.test_rows[i]] = fo.scores[m][i];
        fold_labels.push_back(labels[fo.test_rows[i]]);
      }
      FoldResult fr;
      fr.fold = f;
      fr.n_test = fo.test_rows.size();
      fr.confusion = confusion(fo.scores[m], fold_labels, 1, options.threshold);
      fr.metrics = metrics(fr.confusion);
      const auto pos = std::count(fold_labels.begin(), fold_labels.end(), 1);
      if (pos > 0 && pos < static_cast<std::ptrdiff_t>(fold_labels.size())) {
        fr.auc = roc_auc(fo.scores[m], fold_labels, 1).auc;
        aucs.push_back(*fr.auc);
      }
      precisions.push_back(fr.metrics.precision);
      recalls.push_back(fr.metrics.recall);
      f1s.push_back(fr.metrics.f1);
      accuracies.push_back(fr.metrics.accuracy);
      mr.folds.push_back(fr);
    }
    mr.fold_auc = mean_sd(aucs);
    mr.fold_precision = mean_sd(precisions);
    mr.fold_recall = mean_sd(recalls);
    mr.fold_f1 = mean_sd(f1s);
    mr.fold_accuracy = mean_sd(accuracies);

    mr.pooled = score_metrics(mr.out_of_fold_scores, labels, options.threshold);
    // The other orientation: the same predictions read from the other class.
    mr.pooled_reverse.confusion = mr.pooled.confusion.swapped();
    mr.pooled_reverse.metrics = metrics(mr.pooled_reverse.confusion);
    std::vector<double> negated(mr.out_of_fold_scores.size());
    for (std::size_t i = 0; i < negated.size(); ++i) negated[i] = -mr.out_of_fold_scores[i];
    mr.pooled_reverse.auc = roc_auc(negated, reverse_labels, 1).auc;
    report.models.push_back(std::move(mr));
  }
  return report;
}

}  // namespace tabrank
