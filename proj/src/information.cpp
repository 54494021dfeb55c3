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

#include "tabrank/information.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include "tabrank/error.hpp"
#include "tabrank/folds.hpp"
#include "tabrank/preprocess.hpp"

namespace tabrank {

double entropy(std::span<const std::int64_t> counts) {
  std::int64_t total = 0;
  for (std::int64_t c : counts) {
    if (c < 0) throw Error(ErrorCode::kInvalidArgument, "class counts must be nonnegative");
    total += c;
  }
  if (total == 0) throw Error(ErrorCode::kEmptyCounts, "entropy of an empty count vector");
  double h = 0.0;
  for (std::int64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

namespace {

void require_complete(const Column& col) {
  if (col.missing_count() > 0) {
    throw Error(ErrorCode::kMissingCells, "column '" + col.schema.name + "' has missing cells");
  }
}

std::vector<std::int64_t> class_counts(const Column& target) {
  std::vector<std::int64_t> counts(std::max<std::size_t>(target.levels.size(), 1), 0);
  for (std::int32_t code : target.codes) ++counts[static_cast<std::size_t>(code)];
  return counts;
}

}  // namespace

double conditional_entropy(const DataTable& table, std::size_t attr, std::size_t target) {
  const Column& a = table.column(attr);
  const Column& t = table.column(target);
  if (a.is_numeric()) {
    throw Error(ErrorCode::kNumericAttribute,
                "attribute '" + a.schema.name + "' is numeric; discretize it first");
  }
  if (t.is_numeric()) throw Error(ErrorCode::kNumericAttribute, "target must be categorical");
  require_complete(a);
  require_complete(t);
  if (table.n_rows() == 0) throw Error(ErrorCode::kEmptyCounts, "conditional entropy of an empty table");

  const std::size_t n_classes = std::max<std::size_t>(t.levels.size(), 1);
  const std::size_t n_values = std::max<std::size_t>(a.levels.size(), 1);
  std::vector<std::int64_t> joint(n_values * n_classes, 0);
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    ++joint[static_cast<std::size_t>(a.codes[r]) * n_classes + static_cast<std::size_t>(t.codes[r])];
  }
  const double n = static_cast<double>(table.n_rows());
  double h = 0.0;
  for (std::size_t v = 0; v < n_values; ++v) {
    std::span<const std::int64_t> cell(joint.data() + v * n_classes, n_classes);
    const std::int64_t n_v = std::accumulate(cell.begin(), cell.end(), std::int64_t{0});
    if (n_v == 0) continue;
    h += static_cast<double>(n_v) / n * entropy(cell);
  }
  return h;
}

double information_gain(const DataTable& table, std::size_t attr, std::size_t target) {
  const double h_cond = conditional_entropy(table, attr, target);
  const double h = entropy(class_counts(table.column(target)));
  return std::max(0.0, h - h_cond);
}

FeatureRanking make_ranking(std::vector<std::string> features, std::span<const double> scores) {
  if (features.size() != scores.size()) {
    throw Error(ErrorCode::kLengthMismatch, "feature and score counts differ");
  }
  std::vector<std::size_t> order(features.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  FeatureRanking ranking;
  for (std::size_t i = 0; i < order.size(); ++i) {
    ranking.entries.push_back({std::move(features[order[i]]), scores[order[i]], i + 1});
  }
  return ranking;
}

std::vector<double> feature_gains(const DataTable& table, std::size_t bins) {
  const DataTable binned = apply_discretizer(table, fit_discretizer(table, bins));
  const std::size_t target = binned.target();
  std::vector<double> gains;
  for (std::size_t c : binned.feature_indices()) gains.push_back(information_gain(binned, c, target));
  return gains;
}

namespace {

std::vector<std::string> feature_names(const DataTable& table) {
  std::vector<std::string> names;
  for (std::size_t c : table.feature_indices()) names.push_back(table.column(c).schema.name);
  return names;
}

}  // namespace

FeatureRanking rank_features(const DataTable& table, std::size_t bins) {
  const std::vector<double> gains = feature_gains(table, bins);
  return make_ranking(feature_names(table), gains);
}

CrossValidatedRanking cross_validated_ranking(const DataTable& table, std::size_t k, std::uint64_t seed,
                                              std::size_t bins) {
  const Column& target = table.column(table.target());
  require_complete(target);
  const FoldPlan plan = stratified_folds(target.codes, k, seed);

  std::vector<std::future<std::vector<double>>> pending;
  pending.reserve(k);
  for (std::size_t f = 0; f < k; ++f) {
    pending.push_back(std::async(std::launch::async, [&, f] {
      const std::vector<std::size_t> rows = plan.train_rows(f);
      return feature_gains(table.select_rows(rows), bins);
    }));
  }

  CrossValidatedRanking out;
  out.features = feature_names(table);
  std::vector<double> mean(out.features.size(), 0.0);
  for (std::size_t f = 0; f < k; ++f) {
    out.fold_scores.push_back(pending[f].get());
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += out.fold_scores[f][i];
  }
  for (double& m : mean) m /= static_cast<double>(k);
  out.ranking = make_ranking(out.features, mean);
  return out;
}

}  // namespace tabrank
