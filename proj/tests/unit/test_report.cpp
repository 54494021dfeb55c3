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


#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "tabrank/report.hpp"
#include "tabrank/synth.hpp"
#include "test_util.hpp"

using namespace tabrank;
using namespace tabrank::testing;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

DataTable small_planted() {
  PlantedSpec spec;
  spec.n_rows = 120;
  spec.seed = 3;
  spec.features = planted_features({0.9, 0.2});
  return gen_planted_dataset(spec);
}

}  // namespace

TEST_SUITE("reports") {
  TEST_CASE("ranking markdown has the two-column layout") {
    const CrossValidatedRanking cv = cross_validated_ranking(small_planted(), 4, 1, 10);
    const Provenance prov{{"seed", "1"}, {"k", "4"}};
    const auto lines = lines_of(ranking_to_markdown(cv.ranking, prov));
    REQUIRE(lines.size() == 5);
    CHECK(lines[0].rfind("<!-- tabrank rank", 0) == 0);
    CHECK(lines[0].find("seed=1") != std::string::npos);
    CHECK(lines[1] == "| Ranking | Features |");
    CHECK(lines[2] == "|---|---|");
    CHECK(lines[3] == "| 1 | f1 |");
    CHECK(lines[4] == "| 2 | f2 |");
  }

  TEST_CASE("ranking json lists rank, feature and score") {
    RankingRun run{cross_validated_ranking(small_planted(), 4, 1, 10), 4, 1, 10};
    const auto doc = nlohmann::json::parse(ranking_to_json(run, {{"command", "rank"}}));
    CHECK(doc.at("provenance").at("command") == "rank");
    CHECK(doc.at("k") == 4);
    const auto& ranking = doc.at("ranking");
    REQUIRE(ranking.size() == 2);
    CHECK(ranking[0].at("rank") == 1);
    CHECK(ranking[0].at("feature") == "f1");
    CHECK(ranking[0].at("score_bits").get<double>() == run.result.ranking.entries[0].score_bits);
    CHECK(doc.at("fold_scores_bits").size() == 4);
  }

  TEST_CASE("evaluation markdown has the metric columns per model") {
    const std::vector<ModelSpec> specs{{Algorithm::kDecisionTree, {}, 1}, {Algorithm::kNaiveBayes, {}, 1}};
    CvOptions opts;
    opts.k = 4;
    opts.seed = 2;
    const EvalReport report = evaluate_cv(small_planted(), specs, opts);
    const std::string md = report_to_markdown(report, {{"seed", "2"}});
    const auto lines = lines_of(md);
    const std::string header = "| Model | AUC | Precision | Recall | F-1 Score | Accuracy |";
    std::size_t first = 0;
    while (first < lines.size() && lines[first] != header) ++first;
    REQUIRE(first + 3 < lines.size());
    CHECK(lines[first + 2].rfind("| Decision Tree | ", 0) == 0);
    CHECK(lines[first + 3].rfind("| Naïve Bayes | ", 0) == 0);
    CHECK(md.find("positive class: yes") != std::string::npos);
    CHECK(md.find("positive class: no") != std::string::npos);

    const auto doc = nlohmann::json::parse(report_to_json(report, {{"seed", "2"}}));
    CHECK(doc.at("models").size() == 2);
    CHECK(doc.at("models")[0].at("pooled").at("auc").get<double>() == report.models[0].pooled.auc);
    CHECK(doc.at("models")[0].at("folds").size() == 4);
    CHECK(report_to_json(report, {{"seed", "2"}}) == report_to_json(report, {{"seed", "2"}}));
  }
}
