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

#include "tabrank/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "tabrank/error.hpp"

namespace tabrank {

SparseDropResult drop_sparse_columns(const DataTable& table, double max_missing_rate) {
  if (!(max_missing_rate >= 0.0 && max_missing_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "missing-rate threshold must lie in [0, 1]");
  }
  SparseDropResult result;
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    const Column& col = table.column(c);
    const double rate = table.n_rows() == 0
                            ? 0.0
                            : static_cast<double>(col.missing_count()) / static_cast<double>(table.n_rows());
    if (col.schema.role == ColumnRole::kFeature && rate > max_missing_rate) {
      result.dropped.push_back({col.schema.name, rate});
    } else {
      keep.push_back(c);
    }
  }
  result.table = table.select_columns(keep);
  return result;
}

MissingPolicy parse_missing_policy(std::string_view text) {
  if (text == "drop_rows") return MissingPolicy::kDropRows;
  if (text == "impute") return MissingPolicy::kImpute;
  throw Error(ErrorCode::kConfig, "unknown missing policy '" + std::string(text) +
                                      "' (expected drop_rows or impute)");
}

const char* to_string(MissingPolicy policy) noexcept {
  return policy == MissingPolicy::kDropRows ? "drop_rows" : "impute";
}

namespace {

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

DataTable resolve_missing(const DataTable& table, MissingPolicy policy) {
  const auto target = table.target_index();
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    bool keep = !(target && table.column(*target).is_missing(r));
    if (keep && policy == MissingPolicy::kDropRows) {
      for (const Column& col : table.columns()) {
        if (col.is_missing(r)) {
          keep = false;
          break;
        }
      }
    }
    if (keep) rows.push_back(r);
  }
  if (rows.empty()) throw Error(ErrorCode::kEmptyTable, "no rows left after resolving missing values");
  DataTable kept = table.select_rows(rows);
  if (policy == MissingPolicy::kDropRows || kept.missing_count() == 0) return kept;

  std::vector<Column> columns = kept.columns();
  for (Column& col : columns) {
    const std::size_t missing = col.missing_count();
    if (missing == 0) continue;
    if (missing == col.size()) {
      throw Error(ErrorCode::kMissingCells,
                  "column '" + col.schema.name + "' has no observed values to impute from");
    }
    if (col.is_numeric()) {
      std::vector<double> observed;
      for (std::size_t r = 0; r < col.size(); ++r) {
        if (!col.is_missing(r)) observed.push_back(col.numeric[r]);
      }
      const double fill = median_of(std::move(observed));
      for (std::size_t r = 0; r < col.size(); ++r) {
        if (col.is_missing(r)) col.numeric[r] = fill;
      }
    } else {
      std::vector<std::size_t> counts(col.levels.size(), 0);
      for (std::size_t r = 0; r < col.size(); ++r) {
        if (!col.is_missing(r)) ++counts[static_cast<std::size_t>(col.codes[r])];
      }
      const auto mode = static_cast<std::int32_t>(
          std::max_element(counts.begin(), counts.end()) - counts.begin());
      for (std::size_t r = 0; r < col.size(); ++r) {
        if (col.is_missing(r)) col.codes[r] = mode;
      }
    }
    std::fill(col.missing.begin(), col.missing.end(), std::uint8_t{0});
  }
  return DataTable(std::move(columns), std::vector<std::size_t>(kept.row_ids().begin(), kept.row_ids().end()));
}

const ColumnRange* NormalizationMap::find(std::string_view name) const noexcept {
  for (const ColumnRange& range : columns) {
    if (range.name == name) return &range;
  }
  return nullptr;
}

NormalizationMap fit_minmax(const DataTable& table) {
  NormalizationMap map;
  for (const Column& col : table.columns()) {
    if (!col.is_numeric()) continue;
    ColumnRange range{col.schema.name, 0.0, 0.0};
    bool seen = false;
    for (std::size_t r = 0; r < col.size(); ++r) {
      if (col.is_missing(r)) continue;
      const double v = col.numeric[r];
      if (!seen) {
        range.min = range.max = v;
        seen = true;
      } else {
        range.min = std::min(range.min, v);
        range.max = std::max(range.max, v);
      }
    }
    map.columns.push_back(std::move(range));
  }
  return map;
}

namespace {

const ColumnRange& require_range(const NormalizationMap& map, const Column& col) {
  const ColumnRange* range = map.find(col.schema.name);
  if (range == nullptr) {
    throw Error(ErrorCode::kUnknownColumn,
                "numeric column '" + col.schema.name + "' has no normalization range");
  }
  return *range;
}

DataTable rebuild(const DataTable& table, std::vector<Column> columns) {
  return DataTable(std::move(columns), std::vector<std::size_t>(table.row_ids().begin(), table.row_ids().end()));
}

}  // namespace

DataTable apply_minmax(const DataTable& table, const NormalizationMap& map) {
  std::vector<Column> columns = table.columns();
  for (Column& col : columns) {
    if (!col.is_numeric()) continue;
    const ColumnRange& range = require_range(map, col);
    const double span = range.max - range.min;
    for (std::size_t r = 0; r < col.size(); ++r) {
      if (col.is_missing(r)) continue;
      double& v = col.numeric[r];
      v = span > 0.0 ? std::clamp((v - range.min) / span, 0.0, 1.0) : 0.0;
    }
  }
  return rebuild(table, std::move(columns));
}

DataTable invert_minmax(const DataTable& table, const NormalizationMap& map) {
  std::vector<Column> columns = table.columns();
  for (Column& col : columns) {
    if (!col.is_numeric()) continue;
    const ColumnRange& range = require_range(map, col);
    for (std::size_t r = 0; r < col.size(); ++r) {
      if (col.is_missing(r)) continue;
      double& v = col.numeric[r];
      v = range.min + v * (range.max - range.min);
    }
  }
  return rebuild(table, std::move(columns));
}

const BinEdges* DiscretizationMap::find(std::string_view name) const noexcept {
  for (const BinEdges& b : columns) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

DiscretizationMap fit_discretizer(const DataTable& table, std::size_t bins) {
  if (bins < 1) throw Error(ErrorCode::kInvalidArgument, "bin count must be at least 1");
  DiscretizationMap map;
  for (const Column& col : table.columns()) {
    if (!col.is_numeric() || col.schema.role != ColumnRole::kFeature) continue;
    std::vector<double> values;
    values.reserve(col.size());
    for (std::size_t r = 0; r < col.size(); ++r) {
      if (!col.is_missing(r)) values.push_back(col.numeric[r]);
    }
    std::sort(values.begin(), values.end());
    BinEdges entry{col.schema.name, {}};
    const std::size_t n = values.size();
    for (std::size_t j = 1; j < bins && n > 0; ++j) {
      const std::size_t lower = j * n / bins;  // observations at or below the edge
      if (lower == 0) continue;
      const double edge = values[lower - 1];
      if (edge >= values.back()) break;
      if (entry.edges.empty() || edge > entry.edges.back()) entry.edges.push_back(edge);
    }
    map.columns.push_back(std::move(entry));
  }
  return map;
}

std::size_t assign_bin(std::span<const double> edges, double value) noexcept {
  return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), value) - edges.begin());
}

DataTable apply_discretizer(const DataTable& table, const DiscretizationMap& map) {
  std::vector<Column> columns = table.columns();
  for (Column& col : columns) {
    if (!col.is_numeric()) continue;
    const BinEdges* entry = map.find(col.schema.name);
    if (entry == nullptr) continue;
    Column binned;
    binned.schema = col.schema;
    binned.schema.kind = ColumnKind::kCategorical;
    binned.missing = col.missing;
    binned.codes.resize(col.size(), 0);
    for (std::size_t b = 0; b < entry->bin_count(); ++b) binned.levels.push_back("bin" + std::to_string(b));
    for (std::size_t r = 0; r < col.size(); ++r) {
      if (!col.is_missing(r)) {
        binned.codes[r] = static_cast<std::int32_t>(assign_bin(entry->edges, col.numeric[r]));
      }
    }
    col = std::move(binned);
  }
  return rebuild(table, std::move(columns));
}

}  // namespace tabrank
