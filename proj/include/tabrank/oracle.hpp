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

#include "tabrank/table.hpp"

// Brute-force references for the information-gain and ROC code. They share
// no code with the implementations they check.
namespace tabrank::oracle {

// Information gain of categorical column `attr` for the table's target,
// recounted with nested loops over distinct values and classes.
double oracle_ig(const DataTable& table, std::size_t attr);

// (#concordant pos/neg pairs + 0.5 * #tied pairs) / (#pos * #neg), O(n^2).
// Throws SingleClassLabels unless both classes appear.
double oracle_auc_paircount(std::span<const double> scores, std::span<const std::int32_t> labels,
                            std::int32_t positive);

}  // namespace tabrank::oracle
