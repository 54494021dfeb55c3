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

#include <string>
#include <utility>
#include <vector>

#include "tabrank/evaluation.hpp"
#include "tabrank/information.hpp"

namespace tabrank {

// Ordered key/value pairs describing how an artifact was produced. Written
// verbatim into every JSON and markdown artifact.
using Provenance = std::vector<std::pair<std::string, std::string>>;

struct RankingRun {
  CrossValidatedRanking result;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t bins = 0;
};

std::string ranking_to_json(const RankingRun& run, const Provenance& provenance);
// Two columns: Ranking, Features.
std::string ranking_to_markdown(const FeatureRanking& ranking, const Provenance& provenance);

std::string report_to_json(const EvalReport& report, const Provenance& provenance,
                           const std::vector<EvalReport>& repeats = {});
// Rows per model; columns AUC, Precision, Recall, F-1 Score, Accuracy. One
// pooled table per class orientation, then fold mean and sd.
std::string report_to_markdown(const EvalReport& report, const Provenance& provenance,
                               const std::vector<EvalReport>& repeats = {});

}  // namespace tabrank
