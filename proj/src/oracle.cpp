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

#include "tabrank/oracle.hpp"

#include <cmath>
#include <vector>

#include "tabrank/error.hpp"

namespace tabrank::oracle {

namespace {

double bits(double p) { return std::log(p) / std::log(2.0); }

}  // namespace

double oracle_ig(const DataTable& table, std::size_t attr) {
  const Column& a = table.column(attr);
  const Column& t = table.column(table.target());
  if (a.is_numeric()) throw Error(ErrorCode::kNumericAttribute, "oracle_ig needs a categorical attribute");
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    if (a.is_missing(r) || t.is_missing(r)) throw Error(ErrorCode::kMissingCells, "oracle_ig needs complete rows");
  }
  const std::size_t n = table.n_rows();
  if (n == 0) throw Error(ErrorCode::kEmptyCounts, "oracle_ig of an empty table");

  // Distinct attribute values and classes, by string, in order of appearance.
  std::vector<std::string> values;
  std::vector<std::string> classes;
  for (std::size_t r = 0; r < n; ++r) {
    const std::string& v = a.levels[static_cast<std::size_t>(a.codes[r])];
    const std::string& c = t.levels[static_cast<std::size_t>(t.codes[r])];
    bool seen_v = false;
    for (const std::string& x : values) seen_v = seen_v || x == v;
    if (!seen_v) values.push_back(v);
    bool seen_c = false;
    for (const std::string& x : classes) seen_c = seen_c || x == c;
    if (!seen_c) classes.push_back(c);
  }

  double h_total = 0.0;
  for (const std::string& c : classes) {
    std::size_t count = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (t.levels[static_cast<std::size_t>(t.codes[r])] == c) ++count;
    }
    const double p = static_cast<double>(count) / static_cast<double>(n);
    h_total -= p * bits(p);
  }

  double h_cond = 0.0;
  for (const std::string& v : values) {
    std::size_t n_v = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (a.levels[static_cast<std::size_t>(a.codes[r])] == v) ++n_v;
    }
    double h_v = 0.0;
    for (const std::string& c : classes) {
      std::size_t count = 0;
      for (std::size_t r = 0; r < n; ++r) {
        if (a.levels[static_cast<std::size_t>(a.codes[r])] == v && t.levels[static_cast<std::size_t>(t.codes[r])] == c) {
          ++count;
        }
      }
      if (count == 0) continue;
      const double p = static_cast<double>(count) / static_cast<double>(n_v);
      h_v -= p * bits(p);
    }
    h_cond += static_cast<double>(n_v) / static_cast<double>(n) * h_v;
  }
  const double ig = h_total - h_cond;
  return ig < 0.0 ? 0.0 : ig;
}

double oracle_auc_paircount(std::span<const double> scores, std::span<const std::int32_t> labels,
                            std::int32_t positive) {
  if (scores.size() != labels.size()) throw Error(ErrorCode::kLengthMismatch, "score and label counts differ");
  std::int64_t concordant = 0;
  std::int64_t tied = 0;
  std::int64_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != positive) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] == positive) continue;
      ++pairs;
      if (scores[i] > scores[j]) ++concordant;
      else if (scores[i] == scores[j]) ++tied;
    }
  }
  if (pairs == 0) throw Error(ErrorCode::kSingleClassLabels, "pair-count AUC needs both classes");
  return (static_cast<double>(concordant) + 0.5 * static_cast<double>(tied)) / static_cast<double>(pairs);
}

}  // namespace tabrank::oracle
