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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tabrank {

enum class ColumnKind { kNumeric, kCategorical };
enum class ColumnRole { kFeature, kTarget };

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  ColumnRole role = ColumnRole::kFeature;

  bool operator==(const ColumnSchema&) const = default;
};

const char* to_string(ColumnKind kind) noexcept;
const char* to_string(ColumnRole role) noexcept;
ColumnKind parse_column_kind(std::string_view text);
ColumnRole parse_column_role(std::string_view text);

// One typed column. Numeric columns use `numeric`; categorical columns store
// an index into `levels` per row. Missing cells keep a placeholder value
// (0.0 or code 0) and are flagged in `missing`.
struct Column {
  ColumnSchema schema;
  std::vector<double> numeric;
  std::vector<std::int32_t> codes;
  std::vector<std::string> levels;
  std::vector<std::uint8_t> missing;

  bool is_numeric() const noexcept { return schema.kind == ColumnKind::kNumeric; }
  bool is_missing(std::size_t row) const noexcept { return missing[row] != 0; }
  std::size_t size() const noexcept { return missing.size(); }
  std::size_t missing_count() const noexcept;

  // Level index for `value`, or -1 when the column has never seen it.
  std::int32_t find_level(std::string_view value) const noexcept;
};

// Immutable column-major table. `row_ids` records, for each row, its index in
// the table it was originally loaded or generated as; row subsets keep it so
// consumers can audit which source rows a computation touched.
class DataTable {
 public:
  DataTable() = default;
  explicit DataTable(std::vector<Column> columns, std::vector<std::size_t> row_ids = {});

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return columns_.size(); }

  const std::vector<Column>& columns() const noexcept { return columns_; }
  const Column& column(std::size_t index) const { return columns_.at(index); }
  std::span<const std::size_t> row_ids() const noexcept { return row_ids_; }

  std::optional<std::size_t> find(std::string_view name) const noexcept;
  std::size_t index_of(std::string_view name) const;  // throws UnknownColumn
  std::optional<std::size_t> target_index() const noexcept;
  std::size_t target() const;  // throws MissingColumn when no target
  std::vector<std::size_t> feature_indices() const;
  std::vector<ColumnSchema> schema() const;

  std::size_t missing_count() const noexcept;

  DataTable select_rows(std::span<const std::size_t> rows) const;
  DataTable select_columns(std::span<const std::size_t> cols) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::size_t> row_ids_;
  std::size_t n_rows_ = 0;
};

// Binary view of the target for a designated positive class.
struct BinaryTarget {
  std::string positive;
  std::string negative;  // empty when the target holds a single class
  std::vector<std::uint8_t> is_positive;
  std::size_t positives = 0;
  std::size_t negatives = 0;

  bool has_both_classes() const noexcept { return positives > 0 && negatives > 0; }
};

// Throws UnknownClass when the target has two classes and neither is
// `positive`, and MissingCells when any target cell is missing.
BinaryTarget binary_target(const DataTable& table, std::string_view positive);

struct CsvOptions {
  std::vector<std::string> missing_tokens{"", "NA"};
  // When false, a header without the target column loads as a feature-only
  // table (used for scoring unlabeled files).
  bool require_target = true;
};

std::vector<ColumnSchema> load_schema(const std::string& path);
std::vector<ColumnSchema> parse_schema_json(std::string_view json_text);
std::string schema_to_json(std::span<const ColumnSchema> schema);

DataTable load_csv(const std::string& path, std::span<const ColumnSchema> schema,
                   const CsvOptions& options = {});
DataTable parse_csv(std::string_view text, std::span<const ColumnSchema> schema,
                    const CsvOptions& options = {}, std::string_view source = "<memory>");

// RFC-4180 output; missing cells are written as empty fields.
std::string to_csv(const DataTable& table);
void write_text_file(const std::string& path, std::string_view contents);
std::string read_text_file(const std::string& path);

}  // namespace tabrank
