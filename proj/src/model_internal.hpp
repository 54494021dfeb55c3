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

#include <string_view>
#include <vector>

#include "tabrank/models.hpp"
#include "tabrank/rng.hpp"

namespace tabrank::detail {

struct TrainingData {
  FeatureSchema schema;
  EncodedRows x;
  BinaryTarget target;
};

// Encodes the feature columns of `train` and binarizes its target. Throws
// EmptyTable on zero rows and, when `require_both_classes`, SingleClassTraining.
TrainingData prepare_training(const DataTable& train, std::string_view positive, bool require_both_classes,
                              Algorithm algorithm);

// Model shell with schema, class names, seed, and resolved hyperparameters.
TrainedModel make_model(const ModelSpec& spec, const TrainingData& data);

struct TreeParams {
  std::size_t max_depth = 12;
  std::size_t min_samples_split = 2;
  std::size_t max_features = 0;  // 0 or >= d: all features
};

// Grows one tree on `rows` (duplicates allowed). `rng` is only consulted when
// params.max_features is smaller than the feature count.
Tree grow_tree(const TrainingData& data, std::vector<std::size_t> rows, const TreeParams& params, Rng* rng);

}  // namespace tabrank::detail
