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
#include <string>
#include <vector>

#include "tabrank/table.hpp"

namespace tabrank {

// Shannon entropy in bits of a class-count vector, with 0 * log2(0) = 0.
// Throws EmptyCounts when every count is zero.
double entropy(std::span<const std::int64_t> counts);

// Weighted entropy of the target within each category of `attr`. The
// attribute must be categorical and neither column may have missing cells.
double conditional_entropy(const DataTable& table, std::size_t attr, std::size_t target);

// entropy(target) - conditional_entropy(attr); rounding below zero is clamped.
double information_gain(const DataTable& table, std::size_t attr, std::size_t target);

struct RankedFeature {
  std::string feature;
  double score_bits = 0.0;
  std::size_t rank = 0;  // 1-based
};

struct FeatureRanking {
  std::vector<RankedFeature> entries;
};

// Sorts (feature, score) pairs given in schema order by descending score.
// Equal scores keep schema order.
FeatureRanking make_ranking(std::vector<std::string> features, std::span<const double> scores);

// Discretizes numeric features with `bins` equal-frequency bins fitted on
// `table`, then ranks every feature by its information gain on the target.
FeatureRanking rank_features(const DataTable& table, std::size_t bins);

// Information gain of each feature (schema order) after fitting the
// discretizer on `table`.
std::vector<double> feature_gains(const DataTable& table, std::size_t bins);

struct CrossValidatedRanking {
  FeatureRanking ranking;   // ranked by mean information gain across folds
  std::vector<std::string> features;  // schema order
  std::vector<std::vector<double>> fold_scores;  // [fold][feature], schema order
};

// Runs rank_features on each of the k stratified training folds (everything
// but fold i) and ranks by the arithmetic mean of the per-fold gains.
CrossValidatedRanking cross_validated_ranking(const DataTable& table, std::size_t k, std::uint64_t seed,
                                              std::size_t bins);

}  // namespace tabrank
