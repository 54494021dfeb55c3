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
#include <string>
#include <vector>

#include "tabrank/table.hpp"

namespace tabrank {

struct PlantedFeature {
  std::string name;
  ColumnKind kind = ColumnKind::kCategorical;
  double strength = 0.0;      // probability the value copies the target signal
  double missing_rate = 0.0;
  std::size_t levels = 3;     // distinct values, >= 2
  std::vector<std::string> level_names;  // categorical; defaults to c0, c1, ...
  // Numeric features place level i at low + i * (high - low) / (levels - 1).
  double low = 0.0;
  double high = 2.0;
};

struct PlantedSpec {
  std::size_t n_rows = 1000;
  double positive_rate = 0.5;
  std::uint64_t seed = 0;
  std::vector<PlantedFeature> features;
  std::string target_name = "Has died";
  std::string positive_label = "yes";
  std::string negative_label = "no";
};

// Throws InvalidSpec: n_rows < 10, a rate outside [0, 1], positive_rate not
// in (0, 1), fewer than 2 levels, mismatched level_names, duplicate names.
void validate(const PlantedSpec& spec);

// Per row: the target is positive with probability positive_rate. Each
// feature then takes its signal value (last level when positive, first level
// when negative) with probability `strength`, otherwise a uniformly drawn
// level, and is blanked with probability `missing_rate`. Every cell consumes
// the same number of draws, so the stream does not depend on outcomes.
DataTable gen_planted_dataset(const PlantedSpec& spec);

// Schema of the generated table, target last.
std::vector<ColumnSchema> planted_schema(const PlantedSpec& spec);

// Features f1..fN with the given strengths, alternating categorical and
// numeric, all with three levels.
std::vector<PlantedFeature> planted_features(const std::vector<double>& strengths);

// Seventeen pre-birth survey features and value ranges of the child-mortality
// data set, with strengths decreasing in ranking order.
std::vector<PlantedFeature> survey_shaped_features();

}  // namespace tabrank
