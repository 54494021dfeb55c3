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

#include <algorithm>
#include <cmath>

#include "model_internal.hpp"
#include "tabrank/error.hpp"

namespace tabrank {

TrainedModel train_naive_bayes(const DataTable& train, const ModelSpec& spec, std::string_view positive) {
  if (spec.algorithm != Algorithm::kNaiveBayes) throw Error(ErrorCode::kInvalidSpec, "spec is not naive bayes");
  validate(spec);
  const detail::TrainingData data = detail::prepare_training(train, positive, true, spec.algorithm);
  TrainedModel model = detail::make_model(spec, data);
  const double alpha = spec.param("alpha");
  const double var_floor = spec.param("var_floor");

  const std::size_t n = data.x.n_rows;
  const double class_n[2] = {static_cast<double>(data.target.negatives),
                             static_cast<double>(data.target.positives)};
  NaiveBayesModel nb;
  for (int c = 0; c < 2; ++c) nb.log_prior[c] = std::log(class_n[c] / static_cast<double>(n));

  for (std::size_t f = 0; f < data.schema.features.size(); ++f) {
    const FeatureInfo& info = data.schema.features[f];
    NaiveBayesFeature feat;
    feat.kind = info.kind;
    if (info.kind == ColumnKind::kNumeric) {
      double sum[2] = {0.0, 0.0};
      for (std::size_t r = 0; r < n; ++r) sum[data.target.is_positive[r]] += data.x.row(r)[f];
      for (int c = 0; c < 2; ++c) feat.mean[c] = sum[c] / class_n[c];
      double ss[2] = {0.0, 0.0};
      for (std::size_t r = 0; r < n; ++r) {
        const int c = data.target.is_positive[r];
        const double d = data.x.row(r)[f] - feat.mean[c];
        ss[c] += d * d;
      }
      for (int c = 0; c < 2; ++c) feat.variance[c] = std::max(ss[c] / class_n[c], var_floor);
    } else {
      const std::size_t k = info.levels.size();
      std::vector<double> counts[2] = {std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
      for (std::size_t r = 0; r < n; ++r) {
        counts[data.target.is_positive[r]][static_cast<std::size_t>(data.x.row(r)[f])] += 1.0;
      }
      for (int c = 0; c < 2; ++c) {
        const double denom = class_n[c] + alpha * static_cast<double>(k);
        feat.log_likelihood[c].resize(k);
        for (std::size_t l = 0; l < k; ++l) feat.log_likelihood[c][l] = std::log((counts[c][l] + alpha) / denom);
        feat.log_unseen[c] = std::log(alpha / denom);
      }
    }
    nb.features.push_back(std::move(feat));
  }
  model.params = std::move(nb);
  return model;
}

}  // namespace tabrank
