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

#include "tabrank/synth.hpp"

#include <algorithm>
#include <unordered_set>

#include "tabrank/error.hpp"
#include "tabrank/rng.hpp"

namespace tabrank {

namespace {

bool is_rate(double v) { return v >= 0.0 && v <= 1.0; }

std::vector<std::string> level_names_of(const PlantedFeature& f) {
  if (!f.level_names.empty()) return f.level_names;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < f.levels; ++i) names.push_back("c" + std::to_string(i));
  return names;
}

}  // namespace

void validate(const PlantedSpec& spec) {
  const auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidSpec, msg); };
  if (spec.n_rows < 10) fail("n_rows must be at least 10");
  if (!(spec.positive_rate > 0.0 && spec.positive_rate < 1.0)) fail("positive rate must lie in (0, 1)");
  if (spec.positive_label == spec.negative_label) fail("class labels must differ");
  std::unordered_set<std::string> names{spec.target_name};
  for (const PlantedFeature& f : spec.features) {
    if (!names.insert(f.name).second) fail("duplicate column name '" + f.name + "'");
    if (!is_rate(f.strength)) fail("strength of '" + f.name + "' must lie in [0, 1]");
    if (!is_rate(f.missing_rate)) fail("missing rate of '" + f.name + "' must lie in [0, 1]");
    if (f.levels < 2) fail("feature '" + f.name + "' needs at least 2 levels");
    if (!f.level_names.empty() && f.level_names.size() != f.levels) {
      fail("feature '" + f.name + "' lists " + std::to_string(f.level_names.size()) + " level names for " +
           std::to_string(f.levels) + " levels");
    }
    if (f.kind == ColumnKind::kNumeric && !(f.low < f.high)) fail("feature '" + f.name + "' needs low < high");
  }
}

std::vector<ColumnSchema> planted_schema(const PlantedSpec& spec) {
  std::vector<ColumnSchema> schema;
  for (const PlantedFeature& f : spec.features) schema.push_back({f.name, f.kind, ColumnRole::kFeature});
  schema.push_back({spec.target_name, ColumnKind::kCategorical, ColumnRole::kTarget});
  return schema;
}

DataTable gen_planted_dataset(const PlantedSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n_rows;
  std::vector<Column> columns(spec.features.size() + 1);
  for (std::size_t f = 0; f < spec.features.size(); ++f) {
    const PlantedFeature& pf = spec.features[f];
    Column& col = columns[f];
    col.schema = {pf.name, pf.kind, ColumnRole::kFeature};
    col.missing.assign(n, 0);
    if (pf.kind == ColumnKind::kNumeric) {
      col.numeric.assign(n, 0.0);
    } else {
      col.codes.assign(n, 0);
      col.levels = level_names_of(pf);
    }
  }
  Column& target = columns.back();
  target.schema = {spec.target_name, ColumnKind::kCategorical, ColumnRole::kTarget};
  target.levels = {spec.negative_label, spec.positive_label};
  target.codes.assign(n, 0);
  target.missing.assign(n, 0);

  Rng rng(spec.seed);
  for (std::size_t r = 0; r < n; ++r) {
    const bool positive = rng.uniform() < spec.positive_rate;
    target.codes[r] = positive ? 1 : 0;
    for (std::size_t f = 0; f < spec.features.size(); ++f) {
      const PlantedFeature& pf = spec.features[f];
      const double u_copy = rng.uniform();
      const double u_level = rng.uniform();
      const double u_missing = rng.uniform();
      std::size_t level = std::min(pf.levels - 1, static_cast<std::size_t>(u_level * static_cast<double>(pf.levels)));
      if (u_copy < pf.strength) level = positive ? pf.levels - 1 : 0;
      Column& col = columns[f];
      if (pf.kind == ColumnKind::kNumeric) {
        col.numeric[r] = pf.low + static_cast<double>(level) * (pf.high - pf.low) / static_cast<double>(pf.levels - 1);
      } else {
        col.codes[r] = static_cast<std::int32_t>(level);
      }
      if (u_missing < pf.missing_rate) col.missing[r] = 1;
    }
  }
  return DataTable(std::move(columns));
}

std::vector<PlantedFeature> planted_features(const std::vector<double>& strengths) {
  std::vector<PlantedFeature> out;
  for (std::size_t i = 0; i < strengths.size(); ++i) {
    PlantedFeature f;
    f.name = "f" + std::to_string(i + 1);
    f.kind = i % 2 == 0 ? ColumnKind::kCategorical : ColumnKind::kNumeric;
    f.strength = strengths[i];
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<PlantedFeature> survey_shaped_features() {
  const auto numeric = [](std::string name, double low, double high) {
    PlantedFeature f;
    f.name = std::move(name);
    f.kind = ColumnKind::kNumeric;
    f.low = low;
    f.high = high;
    return f;
  };
  const auto categorical = [](std::string name, std::vector<std::string> levels) {
    PlantedFeature f;
    f.name = std::move(name);
    f.kind = ColumnKind::kCategorical;
    f.levels = levels.size();
    f.level_names = std::move(levels);
    return f;
  };
  // Listed in questionnaire order; `rank` orders the planted strengths.
  struct Entry {
    PlantedFeature feature;
    int rank;
  };
  std::vector<Entry> entries = {
      {numeric("Interval from previous birth", 9, 267), 6},
      {numeric("Total sons died", 0, 10), 1},
      {numeric("Total daughters died", 0, 5), 2},
      {categorical("Wealth status", {"poorest", "poorer", "middle", "richer", "richest"}), 7},
      {numeric("Total number of births in the last five years", 0, 5), 8},
      {numeric("Number of family members", 1, 25), 9},
      {numeric("Eligible female members in the family", 0, 7), 11},
      {numeric("Total children born", 1, 15), 3},
      {numeric("Education years of mother", 0, 17), 4},
      {categorical("Are children twin", {"no", "yes"}), 5},
      {numeric("Age of mother at first birth", 10, 46), 10},
      {numeric("Birth Month", 1, 12), 12},
      {numeric("Number of breastfeeding months of the last child", 0, 35), 13},
      {categorical("Sex of child", {"male", "female"}), 14},
      {categorical("Is previous children cesarean", {"no", "yes"}), 15},
      {categorical("Size of child on birth",
                   {"very small", "small", "average", "larger than average", "smaller than average"}),
       16},
      {categorical("Is last children cesarean", {"no", "yes"}), 17},
  };
  std::vector<PlantedFeature> out;
  for (Entry& e : entries) {
    e.feature.strength = 0.9 - 0.05 * (e.rank - 1);
    out.push_back(std::move(e.feature));
  }
  return out;
}

}  // namespace tabrank
