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

#include "tabrank/folds.hpp"

#include <map>
#include <string>

#include "tabrank/error.hpp"
#include "tabrank/rng.hpp"

namespace tabrank {

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < assignment.size(); ++r) {
    if (assignment[r] == fold) rows.push_back(r);
  }
  return rows;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < assignment.size(); ++r) {
    if (assignment[r] != fold) rows.push_back(r);
  }
  return rows;
}

std::vector<std::size_t> FoldPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t f : assignment) ++sizes[f];
  return sizes;
}

FoldPlan stratified_folds(std::span<const std::int32_t> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "fold count k must be at least 2");
  std::map<std::int32_t, std::vector<std::size_t>> by_class;
  for (std::size_t r = 0; r < labels.size(); ++r) by_class[labels[r]].push_back(r);
  for (const auto& [label, rows] : by_class) {
    if (rows.size() < k) {
      throw Error(ErrorCode::kTooFewInstances, "class " + std::to_string(label) + " has " +
                                                   std::to_string(rows.size()) + " rows, fewer than k = " +
                                                   std::to_string(k));
    }
  }
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(labels.size(), 0);
  Rng rng(seed);
  std::size_t next_fold = 0;
  for (auto& [label, rows] : by_class) {
    rng.shuffle(std::span<std::size_t>(rows));
    for (std::size_t r : rows) {
      plan.assignment[r] = next_fold;
      next_fold = (next_fold + 1) % k;
    }
  }
  return plan;
}

}  // namespace tabrank
