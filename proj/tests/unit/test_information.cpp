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


#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "tabrank/folds.hpp"
#include "tabrank/information.hpp"
#include "tabrank/oracle.hpp"
#include "tabrank/rng.hpp"
#include "tabrank/synth.hpp"
#include "test_util.hpp"

using namespace tabrank;
using namespace tabrank::testing;

namespace {

// Random table with up to 8 rows and up to 3 categorical attributes of up to
// 3 categories each. Attribute values are returned alongside for rebuilding.
struct RandomTable {
  std::vector<std::vector<std::string>> attrs;
  std::vector<int> labels;

  DataTable build() const {
    std::vector<Column> cols;
    for (std::size_t a = 0; a < attrs.size(); ++a) cols.push_back(categorical("a" + std::to_string(a), attrs[a]));
    cols.push_back(target(yes_no(labels)));
    return table(std::move(cols));
  }
};

RandomTable random_table(Rng& rng) {
  RandomTable t;
  const std::size_t rows = 1 + rng.index(8);
  const std::size_t n_attrs = 1 + rng.index(3);
  t.labels.resize(rows);
  for (int& b : t.labels) b = static_cast<int>(rng.index(2));
  t.attrs.resize(n_attrs);
  for (auto& a : t.attrs) {
    const std::size_t cats = 1 + rng.index(3);
    for (std::size_t r = 0; r < rows; ++r) a.push_back("v" + std::to_string(rng.index(cats)));
  }
  return t;
}

}  // namespace

TEST_SUITE("entropy") {
  TEST_CASE("spot values") {
    const std::vector<std::int64_t> pure{10, 0}, balanced{5, 5}, skewed{1, 3};
    CHECK(entropy(pure) == 0.0);
    CHECK(entropy(balanced) == 1.0);
    const double expected = 0.25 * std::log2(4.0) + 0.75 * std::log2(4.0 / 3.0);
    CHECK(std::abs(entropy(skewed) - expected) < 1e-15);
    CHECK(std::abs(entropy(skewed) - 0.8113) < 1e-4);
  }

  TEST_CASE("empty counts") {
    const std::vector<std::int64_t> zeros{0, 0};
    CHECK(error_of([&] { entropy(zeros); }) == code(ErrorCode::kEmptyCounts));
    CHECK(error_of([] { entropy({}); }) == code(ErrorCode::kEmptyCounts));
  }

  TEST_CASE("bounded by log2 of the class count, maximal only when uniform") {
    Rng rng(3);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<std::int64_t> counts(2 + rng.index(4));
      for (auto& c : counts) c = static_cast<std::int64_t>(rng.index(6));
      if (std::accumulate(counts.begin(), counts.end(), std::int64_t{0}) == 0) counts[0] = 1;
      const double e = entropy(counts);
      const double bound = std::log2(static_cast<double>(counts.size()));
      CHECK(e >= 0.0);
      CHECK(e <= bound + 1e-12);
      const bool uniform = std::all_of(counts.begin(), counts.end(), [&](auto c) { return c == counts[0]; });
      if (!uniform) CHECK(e < bound - 1e-12);
    }
  }
}

TEST_SUITE("information gain") {
  TEST_CASE("conditional entropy examples") {
    const DataTable t = table({categorical("same", {"p", "p", "p", "n"}), categorical("const", {"k", "k", "k", "k"}),
                               categorical("a", {"x", "x", "y", "y"}), target(yes_no({1, 1, 1, 0}))});
    const std::size_t tgt = t.target();
    CHECK(conditional_entropy(t, 0, tgt) == 0.0);
    const std::vector<std::int64_t> counts{3, 1};
    CHECK(conditional_entropy(t, 1, tgt) == doctest::Approx(entropy(counts)).epsilon(1e-15));
    CHECK(conditional_entropy(t, 2, tgt) == doctest::Approx(0.5).epsilon(1e-15));

    CHECK(information_gain(t, 0, tgt) == doctest::Approx(entropy(counts)).epsilon(1e-15));
    CHECK(information_gain(t, 1, tgt) == 0.0);
    CHECK(std::abs(information_gain(t, 2, tgt) - 0.3113) < 1e-4);
    CHECK(information_gain(t, 2, tgt) == doctest::Approx(entropy(counts) - 0.5).epsilon(1e-15));
  }

  TEST_CASE("numeric or incomplete attributes are rejected") {
    const DataTable t = table({numeric("x", {1, 2}), categorical("c", {"a", "?"}), target(yes_no({1, 0}))});
    CHECK(error_of([&] { conditional_entropy(t, 0, t.target()); }) == code(ErrorCode::kNumericAttribute));
    CHECK(error_of([&] { information_gain(t, 1, t.target()); }) == code(ErrorCode::kMissingCells));
  }

  TEST_CASE("agrees with the counting oracle on random tables") {
    Rng rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const DataTable t = random_table(rng).build();
      for (std::size_t a : t.feature_indices()) {
        worst = std::max(worst, std::abs(information_gain(t, a, t.target()) - oracle::oracle_ig(t, a)));
      }
    }
    CHECK(worst <= 1e-12);
  }

  TEST_CASE("bounded by the target entropy") {
    Rng rng(102);
    for (int trial = 0; trial < 500; ++trial) {
      const RandomTable rt = random_table(rng);
      const DataTable t = rt.build();
      const std::int64_t pos = std::count(rt.labels.begin(), rt.labels.end(), 1);
      const std::vector<std::int64_t> counts{pos, static_cast<std::int64_t>(rt.labels.size()) - pos};
      for (std::size_t a : t.feature_indices()) {
        const double ig = information_gain(t, a, t.target());
        CHECK(ig >= 0.0);
        CHECK(ig <= entropy(counts) + 1e-12);
      }
    }
  }

  TEST_CASE("invariant under relabeling categories") {
    Rng rng(103);
    for (int trial = 0; trial < 300; ++trial) {
      RandomTable rt = random_table(rng);
      const DataTable before = rt.build();
      std::vector<std::string> names{"v0", "v1", "v2"};
      std::vector<std::string> renamed{"q", "r", "s"};
      rng.shuffle(std::span<std::string>(renamed));
      for (auto& v : rt.attrs[0]) v = renamed[static_cast<std::size_t>(v[1] - '0')];
      const DataTable after = rt.build();
      CHECK(information_gain(after, 0, after.target()) ==
            doctest::Approx(information_gain(before, 0, before.target())).epsilon(1e-12));
    }
  }

  TEST_CASE("invariant under row permutation") {
    Rng rng(104);
    for (int trial = 0; trial < 300; ++trial) {
      const DataTable t = random_table(rng).build();
      std::vector<std::size_t> perm(t.n_rows());
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(std::span<std::size_t>(perm));
      const DataTable p = t.select_rows(perm);
      for (std::size_t a : t.feature_indices()) {
        CHECK(std::abs(information_gain(p, a, p.target()) - information_gain(t, a, t.target())) <= 1e-12);
      }
    }
  }

  TEST_CASE("merging two categories never increases the gain") {
    Rng rng(105);
    for (int trial = 0; trial < 1000; ++trial) {
      RandomTable rt = random_table(rng);
      const DataTable fine = rt.build();
      for (auto& v : rt.attrs[0]) {
        if (v == "v1") v = "v0";
      }
      const DataTable coarse = rt.build();
      CHECK(oracle::oracle_ig(coarse, 0) <= oracle::oracle_ig(fine, 0) + 1e-12);
      CHECK(information_gain(coarse, 0, coarse.target()) <= information_gain(fine, 0, fine.target()) + 1e-12);
    }
  }
}

TEST_SUITE("ranking") {
  TEST_CASE("a target copy ranks first and noise last") {
    Rng rng(7);
    std::vector<int> y(400);
    std::vector<std::string> copy, noise, weak;
    for (int& b : y) b = rng.uniform() < 0.4;
    for (int b : y) {
      copy.push_back(b ? "d" : "a");
      noise.push_back(rng.uniform() < 0.5 ? "u" : "v");
      weak.push_back(rng.uniform() < 0.7 ? (b ? "d" : "a") : (rng.uniform() < 0.5 ? "d" : "a"));
    }
    const DataTable t = table({categorical("B", noise), categorical("W", weak), categorical("A", copy), target(yes_no(y))});
    const FeatureRanking r = rank_features(t, 10);
    REQUIRE(r.entries.size() == 3);
    CHECK(r.entries[0].feature == "A");
    CHECK(r.entries[1].feature == "W");
    CHECK(r.entries[2].feature == "B");
    for (std::size_t i = 0; i < r.entries.size(); ++i) CHECK(r.entries[i].rank == i + 1);

    const CrossValidatedRanking cv = cross_validated_ranking(t, 10, 42, 10);
    CHECK(cv.ranking.entries[0].feature == "A");
    CHECK(cv.fold_scores.size() == 10);
  }

  TEST_CASE("constant features tie in schema order") {
    const DataTable t = table({categorical("z", {"k", "k", "k"}), numeric("y", {1, 1, 1}),
                               categorical("x", {"k", "k", "k"}), target(yes_no({1, 0, 1}))});
    const FeatureRanking r = rank_features(t, 10);
    REQUIRE(r.entries.size() == 3);
    CHECK(r.entries[0].feature == "z");
    CHECK(r.entries[1].feature == "y");
    CHECK(r.entries[2].feature == "x");
    for (const auto& e : r.entries) CHECK(e.score_bits == 0.0);
  }

  TEST_CASE("numeric features are discretized before scoring") {
    std::vector<double> x;
    std::vector<int> y;
    for (int i = 0; i < 20; ++i) {
      x.push_back(i);
      y.push_back(i >= 10);
    }
    const DataTable t = table({numeric("x", x), target(yes_no(y))});
    CHECK(rank_features(t, 2).entries[0].score_bits == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rank_features(t, 1).entries[0].score_bits == 0.0);
  }

  TEST_CASE("argmax matches the oracle on random tables") {
    Rng rng(106);
    for (int trial = 0; trial < 1000; ++trial) {
      const DataTable t = random_table(rng).build();
      const FeatureRanking r = rank_features(t, 10);
      const auto features = t.feature_indices();
      double best = -1.0;
      for (std::size_t a : features) best = std::max(best, oracle::oracle_ig(t, a));
      const std::size_t top = t.index_of(r.entries[0].feature);
      CHECK(std::abs(oracle::oracle_ig(t, top) - best) <= 1e-12);
      for (std::size_t i = 1; i < r.entries.size(); ++i) {
        CHECK(r.entries[i].score_bits <= r.entries[i - 1].score_bits);
      }
    }
  }

  TEST_CASE("fold means match an independent recomputation") {
    PlantedSpec spec;
    spec.n_rows = 600;
    spec.seed = 77;
    spec.positive_rate = 0.35;
    spec.features = planted_features({0.9, 0.5, 0.2});
    for (auto& f : spec.features) f.kind = ColumnKind::kCategorical;
    const DataTable t = gen_planted_dataset(spec);
    const std::size_t k = 5;
    const CrossValidatedRanking cv = cross_validated_ranking(t, k, 19, 10);

    const FoldPlan plan = stratified_folds(t.column(t.target()).codes, k, 19);
    for (std::size_t a : t.feature_indices()) {
      double sum = 0.0;
      for (std::size_t f = 0; f < k; ++f) {
        const auto rows = plan.train_rows(f);
        sum += oracle::oracle_ig(t.select_rows(rows), a);
      }
      const std::string& name = t.column(a).schema.name;
      const auto it = std::find_if(cv.ranking.entries.begin(), cv.ranking.entries.end(),
                                   [&](const RankedFeature& e) { return e.feature == name; });
      REQUIRE(it != cv.ranking.entries.end());
      CHECK(std::abs(it->score_bits - sum / static_cast<double>(k)) <= 1e-12);
    }
  }

  TEST_CASE("deterministic for a fixed seed") {
    PlantedSpec spec;
    spec.n_rows = 300;
    spec.seed = 5;
    spec.features = planted_features({0.8, 0.4, 0.0, 0.6});
    const DataTable t = gen_planted_dataset(spec);
    const CrossValidatedRanking a = cross_validated_ranking(t, 10, 3, 10);
    const CrossValidatedRanking b = cross_validated_ranking(t, 10, 3, 10);
    REQUIRE(a.ranking.entries.size() == b.ranking.entries.size());
    for (std::size_t i = 0; i < a.ranking.entries.size(); ++i) {
      CHECK(a.ranking.entries[i].feature == b.ranking.entries[i].feature);
      CHECK(a.ranking.entries[i].score_bits == b.ranking.entries[i].score_bits);
    }
    CHECK(a.fold_scores == b.fold_scores);
  }

  TEST_CASE("k below two is rejected") {
    const DataTable t = table({categorical("a", {"x", "y"}), target(yes_no({1, 0}))});
    CHECK(error_of([&] { cross_validated_ranking(t, 1, 0, 10); }) == code(ErrorCode::kInvalidArgument));
  }
}
