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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tabrank/preprocess.hpp"
#include "tabrank/table.hpp"

namespace tabrank {

enum class Algorithm { kDecisionTree, kRandomForest, kNaiveBayes, kLogisticRegression, kLinearSvm };

const char* to_string(Algorithm algorithm) noexcept;
// Row label used in reports ("Decision Tree", ...).
const char* display_name(Algorithm algorithm) noexcept;
Algorithm parse_algorithm(std::string_view text);
std::span<const Algorithm> all_algorithms() noexcept;

struct ModelSpec {
  Algorithm algorithm = Algorithm::kDecisionTree;
  std::map<std::string, double> hyperparameters;  // overrides of the defaults below
  std::uint64_t seed = 0;

  // Value of `key`, falling back to the algorithm default. Throws InvalidSpec
  // for keys the algorithm does not know.
  double param(std::string_view key) const;
};

// Defaults per algorithm:
//   decision_tree        max_depth=12 min_samples_split=2
//   random_forest        n_trees=100 max_depth=12 min_samples_split=2
//                        max_features=0 (ceil(sqrt(d))) bootstrap=1
//   naive_bayes          alpha=1 var_floor=1e-9
//   logistic_regression  lambda=1e-4 learning_rate=0.1 max_epochs=2000 tolerance=1e-6
//   linear_svm           lambda=1e-3 epochs=200
const std::map<std::string, double>& default_hyperparameters(Algorithm algorithm);

// Throws InvalidSpec on unknown keys or out-of-range values.
void validate(const ModelSpec& spec);

struct FeatureInfo {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  std::vector<std::string> levels;  // categorical only

  bool operator==(const FeatureInfo&) const = default;
};

// Feature columns a model was trained on, in training-table order.
struct FeatureSchema {
  std::vector<FeatureInfo> features;

  static FeatureSchema from_table(const DataTable& table);
  // FNV-1a over feature names and kinds. Category levels are excluded so
  // tables with different level sets still match.
  std::uint64_t fingerprint() const noexcept;
};

// Row-major rows encoded against a FeatureSchema: numeric features hold their
// value, categorical features their level index in the schema, or -1 for a
// value the schema has never seen.
struct EncodedRows {
  std::size_t n_rows = 0;
  std::size_t n_features = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * n_features, n_features};
  }
};

// Matches feature columns by name. Throws SchemaMismatch when a model feature
// is absent or has a different kind, and MissingCells on missing values.
EncodedRows encode_rows(const FeatureSchema& schema, const DataTable& table);

// Flattened tree. A node with feature < 0 is a leaf.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;               // numeric: value <= threshold goes to children[0]
  std::vector<std::int32_t> children;   // numeric {left, right}; categorical one per level, -1 = none
  std::int32_t fallback = -1;           // categorical: unseen or untrained level
  std::int64_t positives = 0;
  std::int64_t total = 0;

  double positive_rate() const noexcept {
    return total > 0 ? static_cast<double>(positives) / static_cast<double>(total) : 0.0;
  }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double score(std::span<const double> row) const;
  std::size_t depth() const;
};

struct TreeModel {
  Tree tree;
};

struct ForestModel {
  std::vector<Tree> trees;
};

struct NaiveBayesFeature {
  ColumnKind kind = ColumnKind::kNumeric;
  double mean[2] = {0.0, 0.0};      // numeric, per class (0 = negative, 1 = positive)
  double variance[2] = {1.0, 1.0};
  std::vector<double> log_likelihood[2];  // categorical, per class per level
  double log_unseen[2] = {0.0, 0.0};
};

struct NaiveBayesModel {
  double log_prior[2] = {0.0, 0.0};
  std::vector<NaiveBayesFeature> features;
};

// Weights over the one-hot expanded design (see DesignLayout).
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  // Linear SVM only: score = sigmoid(calibration_slope * margin).
  double calibration_slope = 1.0;
};

struct TrainedModel {
  Algorithm algorithm = Algorithm::kDecisionTree;
  std::string positive_class;
  std::string negative_class;
  FeatureSchema schema;
  // Applied to incoming tables before encoding when present.
  std::optional<NormalizationMap> input_normalization;
  std::map<std::string, double> hyperparameters;  // resolved values used for training
  std::uint64_t seed = 0;
  std::variant<TreeModel, ForestModel, NaiveBayesModel, LinearModel> params;
};

TrainedModel train_decision_tree(const DataTable& train, const ModelSpec& spec, std::string_view positive);
TrainedModel train_random_forest(const DataTable& train, const ModelSpec& spec, std::string_view positive);
TrainedModel train_naive_bayes(const DataTable& train, const ModelSpec& spec, std::string_view positive);
TrainedModel train_logistic_regression(const DataTable& train, const ModelSpec& spec,
                                       std::string_view positive);
TrainedModel train_linear_svm(const DataTable& train, const ModelSpec& spec, std::string_view positive);

// Dispatches on spec.algorithm.
TrainedModel train_model(const DataTable& train, const ModelSpec& spec, std::string_view positive);

// Positive-class score in [0, 1] for a row encoded against model.schema.
double predict_score(const TrainedModel& model, std::span<const double> encoded_row);
// Raw decision value: margin for linear models, otherwise the score itself.
double predict_margin(const TrainedModel& model, std::span<const double> encoded_row);
// Per-tree scores of a forest model, in tree order.
std::vector<double> tree_scores(const TrainedModel& model, std::span<const double> encoded_row);

// True (positive) iff score >= threshold. Threshold must lie in (0, 1).
bool predict_positive(const TrainedModel& model, std::span<const double> encoded_row, double threshold = 0.5);
const std::string& predict_label(const TrainedModel& model, std::span<const double> encoded_row,
                                 double threshold = 0.5);

// Applies input_normalization, checks the schema fingerprint, and scores
// every row of `table`.
std::vector<double> score_table(const TrainedModel& model, const DataTable& table);

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(std::string_view json_text);

}  // namespace tabrank
