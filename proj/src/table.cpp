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

#include "tabrank/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "tabrank/error.hpp"

namespace tabrank {

const char* to_string(ColumnKind kind) noexcept {
  return kind == ColumnKind::kNumeric ? "numeric" : "categorical";
}

const char* to_string(ColumnRole role) noexcept {
  return role == ColumnRole::kFeature ? "feature" : "target";
}

ColumnKind parse_column_kind(std::string_view text) {
  if (text == "numeric") return ColumnKind::kNumeric;
  if (text == "categorical") return ColumnKind::kCategorical;
  throw Error(ErrorCode::kConfig, "unknown column kind '" + std::string(text) + "'");
}

ColumnRole parse_column_role(std::string_view text) {
  if (text == "feature") return ColumnRole::kFeature;
  if (text == "target") return ColumnRole::kTarget;
  throw Error(ErrorCode::kConfig, "unknown column role '" + std::string(text) + "'");
}

std::size_t Column::missing_count() const noexcept {
  return static_cast<std::size_t>(std::count(missing.begin(), missing.end(), std::uint8_t{1}));
}

std::int32_t Column::find_level(std::string_view value) const noexcept {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] == value) return static_cast<std::int32_t>(i);
  }
  return -1;
}

DataTable::DataTable(std::vector<Column> columns, std::vector<std::size_t> row_ids)
    : columns_(std::move(columns)), row_ids_(std::move(row_ids)) {
  n_rows_ = columns_.empty() ? row_ids_.size() : columns_.front().size();
  std::unordered_set<std::string> names;
  std::size_t targets = 0;
  for (const Column& col : columns_) {
    if (!names.insert(col.schema.name).second) {
      throw Error(ErrorCode::kDuplicateHeader, "duplicate column '" + col.schema.name + "'");
    }
    if (col.size() != n_rows_ ||
        (col.is_numeric() ? col.numeric.size() : col.codes.size()) != n_rows_) {
      throw Error(ErrorCode::kInternal, "column '" + col.schema.name + "' has the wrong length");
    }
    if (col.schema.role == ColumnRole::kTarget) {
      ++targets;
      if (col.is_numeric()) {
        throw Error(ErrorCode::kConfig, "target column '" + col.schema.name + "' must be categorical");
      }
    }
  }
  if (targets > 1) throw Error(ErrorCode::kConfig, "schema declares more than one target column");
  if (row_ids_.empty() && n_rows_ > 0) {
    row_ids_.resize(n_rows_);
    for (std::size_t i = 0; i < n_rows_; ++i) row_ids_[i] = i;
  }
  if (row_ids_.size() != n_rows_) throw Error(ErrorCode::kInternal, "row id count mismatch");
}

std::optional<std::size_t> DataTable::find(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].schema.name == name) return i;
  }
  return std::nullopt;
}

std::size_t DataTable::index_of(std::string_view name) const {
  if (auto idx = find(name)) return *idx;
  throw Error(ErrorCode::kUnknownColumn, "unknown column '" + std::string(name) + "'");
}

std::optional<std::size_t> DataTable::target_index() const noexcept {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].schema.role == ColumnRole::kTarget) return i;
  }
  return std::nullopt;
}

std::size_t DataTable::target() const {
  if (auto idx = target_index()) return *idx;
  throw Error(ErrorCode::kMissingColumn, "table has no target column");
}

std::vector<std::size_t> DataTable::feature_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].schema.role == ColumnRole::kFeature) out.push_back(i);
  }
  return out;
}

std::vector<ColumnSchema> DataTable::schema() const {
  std::vector<ColumnSchema> out;
  out.reserve(columns_.size());
  for (const Column& col : columns_) out.push_back(col.schema);
  return out;
}

std::size_t DataTable::missing_count() const noexcept {
  std::size_t total = 0;
  for (const Column& col : columns_) total += col.missing_count();
  return total;
}

DataTable DataTable::select_rows(std::span<const std::size_t> rows) const {
  std::vector<Column> out;
  out.reserve(columns_.size());
  for (const Column& col : columns_) {
    Column sub;
    sub.schema = col.schema;
    sub.levels = col.levels;
    sub.missing.reserve(rows.size());
    if (col.is_numeric()) {
      sub.numeric.reserve(rows.size());
      for (std::size_t r : rows) sub.numeric.push_back(col.numeric.at(r));
    } else {
      sub.codes.reserve(rows.size());
      for (std::size_t r : rows) sub.codes.push_back(col.codes.at(r));
    }
    for (std::size_t r : rows) sub.missing.push_back(col.missing[r]);
    out.push_back(std::move(sub));
  }
  std::vector<std::size_t> ids;
  ids.reserve(rows.size());
  for (std::size_t r : rows) ids.push_back(row_ids_.at(r));
  DataTable result(std::move(out), std::move(ids));
  result.n_rows_ = rows.size();
  return result;
}

DataTable DataTable::select_columns(std::span<const std::size_t> cols) const {
  std::vector<Column> out;
  out.reserve(cols.size());
  for (std::size_t c : cols) out.push_back(columns_.at(c));
  DataTable result(std::move(out), row_ids_);
  result.n_rows_ = n_rows_;
  return result;
}

BinaryTarget binary_target(const DataTable& table, std::string_view positive) {
  const Column& col = table.column(table.target());
  if (col.missing_count() > 0) {
    throw Error(ErrorCode::kMissingCells, "target column '" + col.schema.name + "' has missing cells");
  }
  BinaryTarget out;
  out.positive = std::string(positive);
  const std::int32_t pos_code = col.find_level(positive);
  if (col.levels.size() == 2 && pos_code < 0) {
    throw Error(ErrorCode::kUnknownClass, "positive class '" + std::string(positive) +
                                              "' is not a value of target '" + col.schema.name + "'");
  }
  for (std::size_t i = 0; i < col.levels.size(); ++i) {
    if (static_cast<std::int32_t>(i) != pos_code) out.negative = col.levels[i];
  }
  out.is_positive.resize(col.size());
  for (std::size_t r = 0; r < col.size(); ++r) {
    out.is_positive[r] = col.codes[r] == pos_code ? 1 : 0;
    if (out.is_positive[r]) {
      ++out.positives;
    } else {
      ++out.negatives;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Schema files

std::vector<ColumnSchema> parse_schema_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("schema is not valid JSON: ") + e.what());
  }
  const nlohmann::json& list = doc.is_object() && doc.contains("columns") ? doc.at("columns") : doc;
  if (!list.is_array()) throw Error(ErrorCode::kConfig, "schema must be an array of columns");
  std::vector<ColumnSchema> out;
  std::unordered_set<std::string> names;
  std::size_t targets = 0;
  for (const auto& item : list) {
    if (!item.is_object() || !item.contains("name") || !item.contains("kind")) {
      throw Error(ErrorCode::kConfig, "schema entries need 'name' and 'kind'");
    }
    ColumnSchema col;
    col.name = item.at("name").get<std::string>();
    col.kind = parse_column_kind(item.at("kind").get<std::string>());
    col.role = parse_column_role(item.value("role", std::string("feature")));
    if (!names.insert(col.name).second) {
      throw Error(ErrorCode::kConfig, "schema lists column '" + col.name + "' twice");
    }
    if (col.role == ColumnRole::kTarget) {
      ++targets;
      if (col.kind != ColumnKind::kCategorical) {
        throw Error(ErrorCode::kConfig, "target column '" + col.name + "' must be categorical");
      }
    }
    out.push_back(std::move(col));
  }
  if (targets != 1) throw Error(ErrorCode::kConfig, "schema must declare exactly one target column");
  return out;
}

std::vector<ColumnSchema> load_schema(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open schema file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_schema_json(buffer.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::string schema_to_json(std::span<const ColumnSchema> schema) {
  nlohmann::ordered_json cols = nlohmann::ordered_json::array();
  for (const ColumnSchema& col : schema) {
    cols.push_back({{"name", col.name}, {"kind", to_string(col.kind)}, {"role", to_string(col.role)}});
  }
  nlohmann::ordered_json doc;
  doc["columns"] = std::move(cols);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// CSV

namespace {

using Record = std::vector<std::string>;

std::vector<Record> split_records(std::string_view text, std::string_view source) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          throw Error(ErrorCode::kUnparsableCell,
                      std::string(source) + ": line " + std::to_string(line) + ": stray quote");
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        current.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        if (field_started || !field.empty() || !current.empty()) {
          current.push_back(std::move(field));
          records.push_back(std::move(current));
        }
        current.clear();
        field.clear();
        field_started = false;
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kUnparsableCell, std::string(source) + ": unterminated quoted field");
  }
  if (field_started || !field.empty() || !current.empty()) {
    current.push_back(std::move(field));
    records.push_back(std::move(current));
  }
  return records;
}

bool parse_number(const std::string& text, double& out) {
  std::string_view view(text);
  while (!view.empty() && (view.front() == ' ' || view.front() == '\t')) view.remove_prefix(1);
  while (!view.empty() && (view.back() == ' ' || view.back() == '\t')) view.remove_suffix(1);
  if (view.starts_with('+')) view.remove_prefix(1);
  if (view.empty()) return false;
  const auto [ptr, ec] = std::from_chars(view.data(), view.data() + view.size(), out);
  return ec == std::errc() && ptr == view.data() + view.size() && std::isfinite(out);
}

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos || s.empty() ||
         s.front() == ' ' || s.back() == ' ';
}

void append_field(std::string& out, std::string_view s) {
  if (!needs_quotes(s)) {
    out += s;
    return;
  }
  out += '"';
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

DataTable parse_csv(std::string_view text, std::span<const ColumnSchema> schema,
                    const CsvOptions& options, std::string_view source) {
  const std::vector<Record> records = split_records(text, source);
  const std::string src(source);
  if (records.empty()) throw Error(ErrorCode::kMissingColumn, src + ": missing header row");
  const Record& header = records.front();

  std::unordered_map<std::string, std::size_t> header_pos;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!header_pos.emplace(header[i], i).second) {
      throw Error(ErrorCode::kDuplicateHeader,
                  src + ": header lists column '" + header[i] + "' more than once");
    }
  }
  std::unordered_set<std::string> schema_names;
  for (const ColumnSchema& col : schema) schema_names.insert(col.name);
  for (const std::string& name : header) {
    if (!schema_names.contains(name)) {
      throw Error(ErrorCode::kUnknownColumn, src + ": header column '" + name + "' is not in the schema");
    }
  }

  std::vector<ColumnSchema> kept;
  std::vector<std::size_t> source_pos;
  for (const ColumnSchema& col : schema) {
    auto it = header_pos.find(col.name);
    if (it == header_pos.end()) {
      if (col.role == ColumnRole::kTarget && !options.require_target) continue;
      throw Error(ErrorCode::kMissingColumn, src + ": missing column '" + col.name + "'");
    }
    kept.push_back(col);
    source_pos.push_back(it->second);
  }

  const std::size_t n_rows = records.size() - 1;
  std::vector<Column> columns(kept.size());
  std::vector<std::unordered_map<std::string, std::int32_t>> level_index(kept.size());
  for (std::size_t c = 0; c < kept.size(); ++c) {
    columns[c].schema = kept[c];
    columns[c].missing.assign(n_rows, 0);
    if (kept[c].kind == ColumnKind::kNumeric) {
      columns[c].numeric.assign(n_rows, 0.0);
    } else {
      columns[c].codes.assign(n_rows, 0);
    }
  }

  const auto is_missing_token = [&](const std::string& s) {
    return std::find(options.missing_tokens.begin(), options.missing_tokens.end(), s) !=
           options.missing_tokens.end();
  };

  for (std::size_t r = 0; r < n_rows; ++r) {
    const Record& rec = records[r + 1];
    if (rec.size() != header.size()) {
      throw Error(ErrorCode::kUnparsableCell, src + ": row " + std::to_string(r + 1) + " has " +
                                                  std::to_string(rec.size()) + " fields, expected " +
                                                  std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < kept.size(); ++c) {
      const std::string& cell = rec[source_pos[c]];
      Column& col = columns[c];
      if (is_missing_token(cell)) {
        col.missing[r] = 1;
        continue;
      }
      if (col.is_numeric()) {
        if (!parse_number(cell, col.numeric[r])) {
          throw Error(ErrorCode::kUnparsableCell, src + ": row " + std::to_string(r + 1) +
                                                      ", column '" + col.schema.name +
                                                      "': cannot parse '" + cell + "' as a number");
        }
      } else {
        auto [it, inserted] =
            level_index[c].emplace(cell, static_cast<std::int32_t>(col.levels.size()));
        if (inserted) col.levels.push_back(cell);
        col.codes[r] = it->second;
      }
    }
  }

  for (const Column& col : columns) {
    if (col.schema.role == ColumnRole::kTarget && col.levels.size() > 2) {
      throw Error(ErrorCode::kTargetNotBinary, src + ": target column '" + col.schema.name + "' has " +
                                                   std::to_string(col.levels.size()) +
                                                   " distinct values, expected 2");
    }
  }
  return DataTable(std::move(columns));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

DataTable load_csv(const std::string& path, std::span<const ColumnSchema> schema,
                   const CsvOptions& options) {
  return parse_csv(read_text_file(path), schema, options, path);
}

std::string to_csv(const DataTable& table) {
  std::string out;
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    if (c) out += ',';
    append_field(out, table.column(c).schema.name);
  }
  out += '\n';
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    for (std::size_t c = 0; c < table.n_cols(); ++c) {
      if (c) out += ',';
      const Column& col = table.column(c);
      if (col.is_missing(r)) continue;
      if (col.is_numeric()) {
        out += format_number(col.numeric[r]);
      } else {
        append_field(out, col.levels[static_cast<std::size_t>(col.codes[r])]);
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace tabrank
