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
#include <span>
#include <vector>

namespace tabrank {

// Stratified assignment of rows to k folds.
struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignment;  // row -> fold id in [0, k)

  std::vector<std::size_t> test_rows(std::size_t fold) const;
  std::vector<std::size_t> train_rows(std::size_t fold) const;
  std::vector<std::size_t> fold_sizes() const;
};

// Shuffles the row indices of each class (ascending class id) with a seeded
// generator and deals them round-robin across folds. Dealing continues where
// the previous class stopped, so both the per-class counts and the overall
// fold sizes differ by at most one. Requires 2 <= k <= count of every class
// present; throws TooFewInstances otherwise.
FoldPlan stratified_folds(std::span<const std::int32_t> labels, std::size_t k, std::uint64_t seed);

}  // namespace tabrank
