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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabrank/table.hpp"

namespace tabrank {

inline constexpr double kDefaultMaxMissingRate = 0.3;
inline constexpr std::size_t kDefaultBins = 10;

struct ColumnDrop {
  std::string name;
  double missing_rate = 0.0;
};

struct SparseDropResult {
  DataTable table;
  std::vector<ColumnDrop> dropped;
};

// Removes feature columns whose missing fraction exceeds `max_missing_rate`.
// The target is never dropped and the row count never changes.
SparseDropResult drop_sparse_columns(const DataTable& table, double max_missing_rate);

enum class MissingPolicy { kDropRows, kImpute };

MissingPolicy parse_missing_policy(std::string_view text);
const char* to_string(MissingPolicy policy) noexcept;

// Rows with a missing target are always removed. `kDropRows` also removes rows
// with any missing feature; `kImpute` fills numeric cells with the column
// median and categorical cells with the column mode (ties: lowest level index).
DataTable resolve_missing(const DataTable& table, MissingPolicy policy);

struct ColumnRange {
  std::string name;
  double min = 0.0;
  double max = 0.0;
};

struct NormalizationMap {
  std::vector<ColumnRange> columns;

  const ColumnRange* find(std::string_view name) const noexcept;
};

NormalizationMap fit_minmax(const DataTable& table);
// (v - min) / (max - min) clamped to [0, 1]; constant columns map to 0.0.
DataTable apply_minmax(const DataTable& table, const NormalizationMap& map);
// Inverse of apply_minmax for values inside the fitted range. Constant columns
// come back as their single fitted value.
DataTable invert_minmax(const DataTable& table, const NormalizationMap& map);

struct BinEdges {
  std::string name;
  std::vector<double> edges;  // strictly increasing; bin count = edges.size() + 1

  std::size_t bin_count() const noexcept { return edges.size() + 1; }
};

struct DiscretizationMap {
  std::vector<BinEdges> columns;

  const BinEdges* find(std::string_view name) const noexcept;
};

// Equal-frequency edges per numeric feature. Edge j is the value of the
// floor(j * n / bins)-th smallest observation; duplicate edges and edges equal
// to the column maximum are collapsed, so fewer bins than requested may result.
DiscretizationMap fit_discretizer(const DataTable& table, std::size_t bins);

// Bin index of `value`: the number of edges strictly below it. This puts
// (-inf, e0] in bin 0, (e0, e1] in bin 1, and so on.
std::size_t assign_bin(std::span<const double> edges, double value) noexcept;

// Replaces every numeric column in `map` with a categorical column of bin
// indices. Categorical columns pass through unchanged.
DataTable apply_discretizer(const DataTable& table, const DiscretizationMap& map);

}  // namespace tabrank
