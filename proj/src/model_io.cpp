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

#include <cstdio>

#include "json.hpp"
#include "tabrank/error.hpp"
#include "tabrank/models.hpp"

namespace tabrank {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormat = "tabrank-model";
constexpr int kVersion = 1;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json tree_to_json(const Tree& tree) {
  Json nodes = Json::array();
  for (const TreeNode& n : tree.nodes) {
    Json node;
    node["positives"] = n.positives;
    node["total"] = n.total;
    if (n.feature >= 0) {
      node["feature"] = n.feature;
      if (n.fallback >= 0) {
        node["fallback"] = n.fallback;
      } else {
        node["threshold"] = n.threshold;
      }
      node["children"] = n.children;
    }
    nodes.push_back(std::move(node));
  }
  return nodes;
}

Tree tree_from_json(const Json& nodes, std::size_t n_features) {
  Tree tree;
  for (const Json& j : nodes) {
    TreeNode n;
    n.positives = j.at("positives").get<std::int64_t>();
    n.total = j.at("total").get<std::int64_t>();
    if (j.contains("feature")) {
      n.feature = j.at("feature").get<std::int32_t>();
      n.children = j.at("children").get<std::vector<std::int32_t>>();
      if (j.contains("fallback")) {
        n.fallback = j.at("fallback").get<std::int32_t>();
      } else {
        n.threshold = j.at("threshold").get<double>();
        if (n.children.size() != 2) throw Error(ErrorCode::kInvalidModel, "numeric split needs two children");
      }
      if (n.feature < 0 || static_cast<std::size_t>(n.feature) >= n_features) {
        throw Error(ErrorCode::kInvalidModel, "tree node references an unknown feature");
      }
    }
    tree.nodes.push_back(std::move(n));
  }
  const auto valid = [&](std::int32_t idx) { return idx >= 0 && static_cast<std::size_t>(idx) < tree.nodes.size(); };
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const TreeNode& n = tree.nodes[i];
    if (n.feature < 0) continue;
    if (n.fallback >= 0 && !valid(n.fallback)) throw Error(ErrorCode::kInvalidModel, "bad fallback index");
    for (std::int32_t c : n.children) {
      if (c < 0 && n.fallback >= 0) continue;
      if (!valid(c) || static_cast<std::size_t>(c) <= i) throw Error(ErrorCode::kInvalidModel, "bad child index");
    }
  }
  if (tree.nodes.empty()) throw Error(ErrorCode::kInvalidModel, "tree has no nodes");
  return tree;
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
  Json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["algorithm"] = to_string(model.algorithm);
  doc["positive_class"] = model.positive_class;
  doc["negative_class"] = model.negative_class;
  doc["seed"] = model.seed;
  doc["hyperparameters"] = model.hyperparameters;

  Json features = Json::array();
  for (const FeatureInfo& f : model.schema.features) {
    Json item{{"name", f.name}, {"kind", to_string(f.kind)}};
    if (f.kind == ColumnKind::kCategorical) item["levels"] = f.levels;
    features.push_back(std::move(item));
  }
  doc["schema"] = {{"fingerprint", hex64(model.schema.fingerprint())}, {"features", std::move(features)}};

  if (model.input_normalization) {
    Json ranges = Json::array();
    for (const ColumnRange& r : model.input_normalization->columns) {
      ranges.push_back({{"name", r.name}, {"min", r.min}, {"max", r.max}});
    }
    doc["normalization"] = std::move(ranges);
  } else {
    doc["normalization"] = nullptr;
  }

  Json params;
  if (const auto* t = std::get_if<TreeModel>(&model.params)) {
    params["nodes"] = tree_to_json(t->tree);
  } else if (const auto* f = std::get_if<ForestModel>(&model.params)) {
    Json trees = Json::array();
    for (const Tree& tree : f->trees) trees.push_back(tree_to_json(tree));
    params["trees"] = std::move(trees);
  } else if (const auto* nb = std::get_if<NaiveBayesModel>(&model.params)) {
    params["log_prior"] = {nb->log_prior[0], nb->log_prior[1]};
    Json feats = Json::array();
    for (const NaiveBayesFeature& feat : nb->features) {
      if (feat.kind == ColumnKind::kNumeric) {
        feats.push_back({{"mean", {feat.mean[0], feat.mean[1]}}, {"variance", {feat.variance[0], feat.variance[1]}}});
      } else {
        feats.push_back({{"log_likelihood", {feat.log_likelihood[0], feat.log_likelihood[1]}},
                         {"log_unseen", {feat.log_unseen[0], feat.log_unseen[1]}}});
      }
    }
    params["features"] = std::move(feats);
  } else if (const auto* lin = std::get_if<LinearModel>(&model.params)) {
    params["weights"] = lin->weights;
    params["bias"] = lin->bias;
    if (model.algorithm == Algorithm::kLinearSvm) params["calibration_slope"] = lin->calibration_slope;
  }
  doc["params"] = std::move(params);
  return doc.dump(2) + "\n";
}

TrainedModel model_from_json(std::string_view json_text) {
  try {
    const Json doc = Json::parse(json_text);
    if (doc.at("format").get<std::string>() != kFormat) {
      throw Error(ErrorCode::kInvalidModel, "not a tabrank model document");
    }
    if (doc.at("version").get<int>() != kVersion) {
      throw Error(ErrorCode::kInvalidModel, "unsupported model version " + doc.at("version").dump());
    }
    TrainedModel model;
    model.algorithm = parse_algorithm(doc.at("algorithm").get<std::string>());
    model.positive_class = doc.at("positive_class").get<std::string>();
    model.negative_class = doc.at("negative_class").get<std::string>();
    model.seed = doc.at("seed").get<std::uint64_t>();
    model.hyperparameters = doc.at("hyperparameters").get<std::map<std::string, double>>();

    for (const Json& f : doc.at("schema").at("features")) {
      FeatureInfo info;
      info.name = f.at("name").get<std::string>();
      info.kind = parse_column_kind(f.at("kind").get<std::string>());
      if (info.kind == ColumnKind::kCategorical) info.levels = f.at("levels").get<std::vector<std::string>>();
      model.schema.features.push_back(std::move(info));
    }
    if (doc.at("schema").at("fingerprint").get<std::string>() != hex64(model.schema.fingerprint())) {
      throw Error(ErrorCode::kInvalidModel, "schema fingerprint does not match the listed features");
    }
    if (!doc.at("normalization").is_null()) {
      NormalizationMap map;
      for (const Json& r : doc.at("normalization")) {
        map.columns.push_back({r.at("name").get<std::string>(), r.at("min").get<double>(), r.at("max").get<double>()});
        if (map.columns.back().min > map.columns.back().max) {
          throw Error(ErrorCode::kInvalidModel, "normalization range has min > max");
        }
      }
      model.input_normalization = std::move(map);
    }

    const Json& params = doc.at("params");
    const std::size_t d = model.schema.features.size();
    switch (model.algorithm) {
      case Algorithm::kDecisionTree:
        model.params = TreeModel{tree_from_json(params.at("nodes"), d)};
        break;
      case Algorithm::kRandomForest: {
        ForestModel forest;
        for (const Json& t : params.at("trees")) forest.trees.push_back(tree_from_json(t, d));
        if (forest.trees.empty()) throw Error(ErrorCode::kInvalidModel, "forest has no trees");
        model.params = std::move(forest);
        break;
      }
      case Algorithm::kNaiveBayes: {
        NaiveBayesModel nb;
        const auto prior = params.at("log_prior").get<std::vector<double>>();
        if (prior.size() != 2) throw Error(ErrorCode::kInvalidModel, "log_prior needs two entries");
        nb.log_prior[0] = prior[0];
        nb.log_prior[1] = prior[1];
        const Json& feats = params.at("features");
        if (feats.size() != d) throw Error(ErrorCode::kInvalidModel, "naive bayes feature count mismatch");
        for (std::size_t f = 0; f < d; ++f) {
          NaiveBayesFeature feat;
          feat.kind = model.schema.features[f].kind;
          const Json& j = feats[f];
          for (int c = 0; c < 2; ++c) {
            if (feat.kind == ColumnKind::kNumeric) {
              feat.mean[c] = j.at("mean").at(c).get<double>();
              feat.variance[c] = j.at("variance").at(c).get<double>();
            } else {
              feat.log_likelihood[c] = j.at("log_likelihood").at(c).get<std::vector<double>>();
              feat.log_unseen[c] = j.at("log_unseen").at(c).get<double>();
              if (feat.log_likelihood[c].size() != model.schema.features[f].levels.size()) {
                throw Error(ErrorCode::kInvalidModel, "naive bayes level count mismatch");
              }
            }
          }
          nb.features.push_back(std::move(feat));
        }
        model.params = std::move(nb);
        break;
      }
      case Algorithm::kLogisticRegression:
      case Algorithm::kLinearSvm: {
        LinearModel lin;
        lin.weights = params.at("weights").get<std::vector<double>>();
        lin.bias = params.at("bias").get<double>();
        if (model.algorithm == Algorithm::kLinearSvm) lin.calibration_slope = params.at("calibration_slope").get<double>();
        std::size_t width = 0;
        for (const FeatureInfo& f : model.schema.features) width += f.kind == ColumnKind::kNumeric ? 1 : f.levels.size();
        if (lin.weights.size() != width) throw Error(ErrorCode::kInvalidModel, "weight count does not match schema");
        model.params = std::move(lin);
        break;
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidModel, std::string("malformed model document: ") + e.what());
  }
}

}  // namespace tabrank
