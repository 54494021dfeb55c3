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

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "model_internal.hpp"
#include "tabrank/error.hpp"
#include "tabrank/linear_models.hpp"

namespace tabrank {

namespace {

constexpr std::array<Algorithm, 5> kAlgorithms = {
    Algorithm::kDecisionTree, Algorithm::kRandomForest, Algorithm::kLogisticRegression,
    Algorithm::kNaiveBayes, Algorithm::kLinearSvm};

}  // namespace

const char* to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::kDecisionTree: return "decision_tree";
    case Algorithm::kRandomForest: return "random_forest";
    case Algorithm::kNaiveBayes: return "naive_bayes";
    case Algorithm::kLogisticRegression: return "logistic_regression";
    case Algorithm::kLinearSvm: return "linear_svm";
  }
  return "unknown";
}

const char* display_name(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::kDecisionTree: return "Decision Tree";
    case Algorithm::kRandomForest: return "Random Forest";
    case Algorithm::kNaiveBayes: return "Naïve Bayes";
    case Algorithm::kLogisticRegression: return "Logistic Regression";
    case Algorithm::kLinearSvm: return "Linear SVM";
  }
  return "Unknown";
}

Algorithm parse_algorithm(std::string_view text) {
  for (Algorithm a : kAlgorithms) {
    if (text == to_string(a)) return a;
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown algorithm '" + std::string(text) + "'");
}

std::span<const Algorithm> all_algorithms() noexcept { return kAlgorithms; }

const std::map<std::string, double>& default_hyperparameters(Algorithm algorithm) {
  static const std::map<std::string, double> tree{{"max_depth", 12}, {"min_samples_split", 2}};
  static const std::map<std::string, double> forest{
      {"n_trees", 100}, {"max_depth", 12}, {"min_samples_split", 2}, {"max_features", 0}, {"bootstrap", 1}};
  static const std::map<std::string, double> bayes{{"alpha", 1.0}, {"var_floor", 1e-9}};
  static const std::map<std::string, double> logistic{
      {"lambda", 1e-4}, {"learning_rate", 0.1}, {"max_epochs", 2000}, {"tolerance", 1e-6}};
  static const std::map<std::string, double> svm{{"lambda", 1e-3}, {"epochs", 200}};
  switch (algorithm) {
    case Algorithm::kDecisionTree: return tree;
    case Algorithm::kRandomForest: return forest;
    case Algorithm::kNaiveBayes: return bayes;
    case Algorithm::kLogisticRegression: return logistic;
    case Algorithm::kLinearSvm: return svm;
  }
  return tree;
}

double ModelSpec::param(std::string_view key) const {
  const auto& defaults = default_hyperparameters(algorithm);
  auto def = defaults.find(std::string(key));
  if (def == defaults.end()) {
    throw Error(ErrorCode::kInvalidSpec,
                std::string(to_string(algorithm)) + " has no hyperparameter '" + std::string(key) + "'");
  }
  auto it = hyperparameters.find(std::string(key));
  return it == hyperparameters.end() ? def->second : it->second;
}

void validate(const ModelSpec& spec) {
  const auto& defaults = default_hyperparameters(spec.algorithm);
  for (const auto& [key, value] : spec.hyperparameters) {
    if (!defaults.contains(key)) {
      throw Error(ErrorCode::kInvalidSpec,
                  std::string(to_string(spec.algorithm)) + " has no hyperparameter '" + key + "'");
    }
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::kInvalidSpec, "hyperparameter '" + key + "' must be finite");
    }
  }
  const auto require = [&](std::string_view key, bool ok, const char* rule) {
    if (!ok) {
      std::ostringstream msg;
      msg << to_string(spec.algorithm) << ": " << key << " = " << spec.param(key) << " violates " << rule;
      throw Error(ErrorCode::kInvalidSpec, msg.str());
    }
  };
  const auto is_count = [](double v, double min) { return v >= min && std::floor(v) == v; };
  switch (spec.algorithm) {
    case Algorithm::kRandomForest:
      require("n_trees", is_count(spec.param("n_trees"), 1), "integer >= 1");
      require("max_features", is_count(spec.param("max_features"), 0), "integer >= 0");
      require("bootstrap", spec.param("bootstrap") == 0 || spec.param("bootstrap") == 1, "0 or 1");
      [[fallthrough]];
    case Algorithm::kDecisionTree:
      require("max_depth", is_count(spec.param("max_depth"), 1), "integer >= 1");
      require("min_samples_split", is_count(spec.param("min_samples_split"), 2), "integer >= 2");
      break;
    case Algorithm::kNaiveBayes:
      require("alpha", spec.param("alpha") > 0, "> 0");
      require("var_floor", spec.param("var_floor") > 0, "> 0");
      break;
    case Algorithm::kLogisticRegression:
      require("lambda", spec.param("lambda") >= 0, ">= 0");
      require("learning_rate", spec.param("learning_rate") > 0, "> 0");
      require("max_epochs", is_count(spec.param("max_epochs"), 1), "integer >= 1");
      require("tolerance", spec.param("tolerance") >= 0, ">= 0");
      break;
    case Algorithm::kLinearSvm:
      require("lambda", spec.param("lambda") > 0, "> 0");
      require("epochs", is_count(spec.param("epochs"), 1), "integer >= 1");
      break;
  }
}

FeatureSchema FeatureSchema::from_table(const DataTable& table) {
  FeatureSchema schema;
  for (std::size_t c : table.feature_indices()) {
    const Column& col = table.column(c);
    schema.features.push_back({col.schema.name, col.schema.kind, col.is_numeric() ? std::vector<std::string>{} : col.levels});
  }
  return schema;
}

std::uint64_t FeatureSchema::fingerprint() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const FeatureInfo& f : features) {
    mix(f.name);
    mix(":");
    mix(to_string(f.kind));
    mix(";");
  }
  return h;
}

EncodedRows encode_rows(const FeatureSchema& schema, const DataTable& table) {
  EncodedRows out;
  out.n_rows = table.n_rows();
  out.n_features = schema.features.size();
  out.values.assign(out.n_rows * out.n_features, 0.0);
  for (std::size_t f = 0; f < schema.features.size(); ++f) {
    const FeatureInfo& info = schema.features[f];
    const auto idx = table.find(info.name);
    if (!idx) throw Error(ErrorCode::kSchemaMismatch, "table lacks model feature '" + info.name + "'");
    const Column& col = table.column(*idx);
    if (col.schema.kind != info.kind) {
      throw Error(ErrorCode::kSchemaMismatch, "feature '" + info.name + "' is " + to_string(col.schema.kind) +
                                                  ", model expects " + to_string(info.kind));
    }
    if (col.missing_count() > 0) {
      throw Error(ErrorCode::kMissingCells, "feature '" + info.name + "' has missing cells");
    }
    if (col.is_numeric()) {
      for (std::size_t r = 0; r < out.n_rows; ++r) out.values[r * out.n_features + f] = col.numeric[r];
    } else {
      // Remap the table's level codes onto the schema's level order.
      std::vector<double> remap(col.levels.size(), -1.0);
      for (std::size_t l = 0; l < col.levels.size(); ++l) {
        for (std::size_t m = 0; m < info.levels.size(); ++m) {
          if (info.levels[m] == col.levels[l]) {
            remap[l] = static_cast<double>(m);
            break;
          }
        }
      }
      for (std::size_t r = 0; r < out.n_rows; ++r) {
        out.values[r * out.n_features + f] = remap[static_cast<std::size_t>(col.codes[r])];
      }
    }
  }
  return out;
}

namespace detail {

TrainingData prepare_training(const DataTable& train, std::string_view positive, bool require_both_classes,
                              Algorithm algorithm) {
  if (train.n_rows() == 0) throw Error(ErrorCode::kEmptyTable, "training table has no rows");
  TrainingData data;
  data.target = binary_target(train, positive);
  if (require_both_classes && !data.target.has_both_classes()) {
    throw Error(ErrorCode::kSingleClassTraining,
                std::string(to_string(algorithm)) + ": training data must contain both classes, found only '" +
                    (data.target.positives > 0 ? data.target.positive : data.target.negative) + "'");
  }
  data.schema = FeatureSchema::from_table(train);
  data.x = encode_rows(data.schema, train);
  return data;
}

TrainedModel make_model(const ModelSpec& spec, const TrainingData& data) {
  TrainedModel model;
  model.algorithm = spec.algorithm;
  model.positive_class = data.target.positive;
  model.negative_class = data.target.negative;
  model.schema = data.schema;
  model.seed = spec.seed;
  for (const auto& [key, value] : default_hyperparameters(spec.algorithm)) {
    model.hyperparameters[key] = spec.param(key);
  }
  return model;
}

}  // namespace detail

TrainedModel train_model(const DataTable& train, const ModelSpec& spec, std::string_view positive) {
  switch (spec.algorithm) {
    case Algorithm::kDecisionTree: return train_decision_tree(train, spec, positive);
    case Algorithm::kRandomForest: return train_random_forest(train, spec, positive);
    case Algorithm::kNaiveBayes: return train_naive_bayes(train, spec, positive);
    case Algorithm::kLogisticRegression: return train_logistic_regression(train, spec, positive);
    case Algorithm::kLinearSvm: return train_linear_svm(train, spec, positive);
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown algorithm");
}

namespace {

double naive_bayes_score(const NaiveBayesModel& nb, std::span<const double> row) {
  double log_joint[2] = {nb.log_prior[0], nb.log_prior[1]};
  for (std::size_t f = 0; f < nb.features.size(); ++f) {
    const NaiveBayesFeature& feat = nb.features[f];
    for (int c = 0; c < 2; ++c) {
      if (feat.kind == ColumnKind::kNumeric) {
        const double var = feat.variance[c];
        const double d = row[f] - feat.mean[c];
        log_joint[c] += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
      } else {
        const double code = row[f];
        const auto& table = feat.log_likelihood[c];
        log_joint[c] += (code >= 0 && code < static_cast<double>(table.size()))
                            ? table[static_cast<std::size_t>(code)]
                            : feat.log_unseen[c];
      }
    }
  }
  const double m = std::max(log_joint[0], log_joint[1]);
  const double e0 = std::exp(log_joint[0] - m);
  const double e1 = std::exp(log_joint[1] - m);
  return e1 / (e0 + e1);
}

double linear_margin(const TrainedModel& model, const LinearModel& lin, std::span<const double> row) {
  const DesignLayout layout(model.schema);
  std::vector<double> x(layout.width());
  layout.expand(row, x);
  double z = lin.bias;
  for (std::size_t j = 0; j < x.size(); ++j) z += lin.weights[j] * x[j];
  return z;
}

void check_row(const TrainedModel& model, std::span<const double> row) {
  if (row.size() != model.schema.features.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "row has " + std::to_string(row.size()) + " values, model expects " +
                                                std::to_string(model.schema.features.size()));
  }
}

}  // namespace

double predict_margin(const TrainedModel& model, std::span<const double> encoded_row) {
  check_row(model, encoded_row);
  if (const auto* lin = std::get_if<LinearModel>(&model.params)) return linear_margin(model, *lin, encoded_row);
  return predict_score(model, encoded_row);
}

double predict_score(const TrainedModel& model, std::span<const double> encoded_row) {
  check_row(model, encoded_row);
  struct Visitor {
    const TrainedModel& model;
    std::span<const double> row;
    double operator()(const TreeModel& m) const { return m.tree.score(row); }
    double operator()(const ForestModel& m) const {
      double sum = 0.0;
      for (const Tree& t : m.trees) sum += t.score(row);
      return sum / static_cast<double>(m.trees.size());
    }
    double operator()(const NaiveBayesModel& m) const { return naive_bayes_score(m, row); }
    double operator()(const LinearModel& m) const {
      const double z = linear_margin(model, m, row);
      return sigmoid(model.algorithm == Algorithm::kLinearSvm ? m.calibration_slope * z : z);
    }
  };
  return std::visit(Visitor{model, encoded_row}, model.params);
}

std::vector<double> tree_scores(const TrainedModel& model, std::span<const double> encoded_row) {
  check_row(model, encoded_row);
  const auto* forest = std::get_if<ForestModel>(&model.params);
  if (forest == nullptr) throw Error(ErrorCode::kInvalidArgument, "model is not a random forest");
  std::vector<double> out;
  for (const Tree& t : forest->trees) out.push_back(t.score(encoded_row));
  return out;
}

namespace {

void check_threshold(double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1)");
  }
}

}  // namespace

bool predict_positive(const TrainedModel& model, std::span<const double> encoded_row, double threshold) {
  check_threshold(threshold);
  return predict_score(model, encoded_row) >= threshold;
}

const std::string& predict_label(const TrainedModel& model, std::span<const double> encoded_row,
                                 double threshold) {
  return predict_positive(model, encoded_row, threshold) ? model.positive_class : model.negative_class;
}

std::vector<double> score_table(const TrainedModel& model, const DataTable& table) {
  std::vector<std::size_t> cols;
  for (const FeatureInfo& f : model.schema.features) {
    const auto idx = table.find(f.name);
    if (!idx) throw Error(ErrorCode::kSchemaMismatch, "table lacks model feature '" + f.name + "'");
    cols.push_back(*idx);
  }
  DataTable projected = table.select_columns(cols);
  if (FeatureSchema::from_table(projected).fingerprint() != model.schema.fingerprint()) {
    throw Error(ErrorCode::kSchemaMismatch, "table schema fingerprint does not match the model");
  }
  if (model.input_normalization) projected = apply_minmax(projected, *model.input_normalization);
  const EncodedRows rows = encode_rows(model.schema, projected);
  std::vector<double> scores(rows.n_rows);
  for (std::size_t r = 0; r < rows.n_rows; ++r) scores[r] = predict_score(model, rows.row(r));
  return scores;
}

}  // namespace tabrank
