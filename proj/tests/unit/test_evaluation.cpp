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
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "tabrank/evaluation.hpp"
#include "tabrank/folds.hpp"
#include "tabrank/oracle.hpp"
#include "tabrank/rng.hpp"
#include "tabrank/synth.hpp"
#include "test_util.hpp"

using namespace tabrank;
using namespace tabrank::testing;

namespace {

void check_stratified(const FoldPlan& plan, std::span<const std::int32_t> labels) {
  const std::set<std::int32_t> classes(labels.begin(), labels.end());
  const auto sizes = plan.fold_sizes();
  CHECK(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 1);
  CHECK(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) == labels.size());
  for (std::int32_t c : classes) {
    std::vector<std::size_t> per_fold(plan.k, 0);
    for (std::size_t r = 0; r < labels.size(); ++r) {
      if (labels[r] == c) ++per_fold[plan.assignment[r]];
    }
    CHECK(*std::max_element(per_fold.begin(), per_fold.end()) -
              *std::min_element(per_fold.begin(), per_fold.end()) <=
          1);
  }
  std::vector<int> seen(labels.size(), 0);
  for (std::size_t f = 0; f < plan.k; ++f) {
    for (std::size_t r : plan.test_rows(f)) ++seen[r];
    CHECK(plan.test_rows(f).size() + plan.train_rows(f).size() == labels.size());
  }
  CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
}

std::vector<std::int32_t> random_labels(Rng& rng, std::size_t n, double rate) {
  std::vector<std::int32_t> y(n);
  for (auto& v : y) v = rng.uniform() < rate ? 1 : 0;
  return y;
}

}  // namespace

TEST_SUITE("folds") {
  TEST_CASE("exact divisibility gives one of each class per fold") {
    const std::vector<std::int32_t> labels{1, 1, 1, 1, 1, 0, 0, 0, 0, 0};
    const FoldPlan plan = stratified_folds(labels, 5, 1);
    for (std::size_t f = 0; f < 5; ++f) {
      const auto rows = plan.test_rows(f);
      REQUIRE(rows.size() == 2);
      CHECK(labels[rows[0]] + labels[rows[1]] == 1);
    }
  }

  TEST_CASE("43772 rows into ten folds") {
    Rng rng(1);
    const auto labels = random_labels(rng, 43772, 0.06);
    const FoldPlan plan = stratified_folds(labels, 10, 2014);
    auto sizes = plan.fold_sizes();
    std::sort(sizes.begin(), sizes.end());
    CHECK(std::count(sizes.begin(), sizes.end(), 4377) == 8);
    CHECK(std::count(sizes.begin(), sizes.end(), 4378) == 2);
    check_stratified(plan, labels);
  }

  TEST_CASE("same seed gives the same plan; another seed differs") {
    Rng rng(2);
    const auto labels = random_labels(rng, 200, 0.3);
    CHECK(stratified_folds(labels, 7, 9).assignment == stratified_folds(labels, 7, 9).assignment);
    CHECK(stratified_folds(labels, 7, 9).assignment != stratified_folds(labels, 7, 10).assignment);
  }

  TEST_CASE("random label sets stay stratified") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t k = 2 + rng.index(9);
      const std::size_t n = 2 * k + rng.index(300);
      auto labels = random_labels(rng, n, 0.1 + 0.8 * rng.uniform());
      // Guarantee k rows of each class.
      for (std::size_t i = 0; i < k; ++i) {
        labels[i] = 0;
        labels[n - 1 - i] = 1;
      }
      check_stratified(stratified_folds(labels, k, trial), labels);
    }
  }

  TEST_CASE("too few instances and bad k") {
    const std::vector<std::int32_t> labels{1, 1, 0, 0, 0};
    CHECK(error_of([&] { stratified_folds(labels, 3, 0); }) == code(ErrorCode::kTooFewInstances));
    CHECK(error_of([&] { stratified_folds(labels, 1, 0); }) == code(ErrorCode::kInvalidArgument));
  }
}

TEST_SUITE("confusion and metrics") {
  TEST_CASE("confusion examples") {
    const std::vector<double> ones(4, 1.0);
    const std::vector<std::int32_t> all_pos(4, 1);
    CHECK(confusion(ones, all_pos, 1, 0.5) == ConfusionMatrix{4, 0, 0, 0});

    const std::vector<double> s{0.9, 0.1};
    const std::vector<std::int32_t> y{1, 0};
    const ConfusionMatrix c = confusion(s, y, 1, 0.5);
    CHECK(c.tp == 1);
    CHECK(c.tn == 1);
    CHECK(c.fp == 0);
    CHECK(c.fn == 0);

    const std::vector<std::int32_t> bad{1};
    CHECK(error_of([&] { confusion(s, bad, 1, 0.5); }) == code(ErrorCode::kLengthMismatch));
  }

  TEST_CASE("threshold is inclusive") {
    const std::vector<double> s{0.5, 0.49};
    const std::vector<std::int32_t> y{1, 1};
    CHECK(confusion(s, y, 1, 0.5) == ConfusionMatrix{1, 0, 0, 1});
  }

  TEST_CASE("swapping the positive class mirrors the matrix") {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 1 + rng.index(40);
      std::vector<double> s(n);
      for (double& v : s) v = rng.uniform();
      const auto y = random_labels(rng, n, 0.5);
      std::vector<double> flipped(n);
      for (std::size_t i = 0; i < n; ++i) flipped[i] = 1.0 - s[i];
      // Scores for class 0 are 1 - s; with threshold t the ">= t" rule maps to
      // "s <= 1 - t", so use a threshold no score can hit exactly.
      const ConfusionMatrix a = confusion(s, y, 1, 0.5 + 1e-12);
      const ConfusionMatrix b = confusion(flipped, y, 0, 0.5 - 1e-12);
      CHECK(a.swapped() == b);
      CHECK(a.tp + a.fp + a.tn + a.fn == static_cast<std::int64_t>(n));
    }
  }

  TEST_CASE("metric examples") {
    const Metrics m = metrics({3, 1, 5, 1});
    CHECK(m.precision == 0.75);
    CHECK(m.recall == 0.75);
    CHECK(m.f1 == 0.75);
    CHECK(m.accuracy == 0.8);

    const Metrics perfect = metrics({4, 0, 6, 0});
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.f1 == 1.0);
    CHECK(perfect.accuracy == 1.0);

    const Metrics none = metrics({0, 0, 5, 2});
    CHECK(none.precision == 0.0);
    CHECK(none.precision_undefined);
    CHECK(none.f1 == 0.0);
    CHECK_FALSE(none.recall_undefined);
  }

  TEST_CASE("f1 is the harmonic mean and accuracy is exact") {
    Rng rng(9);
    for (int trial = 0; trial < 500; ++trial) {
      const ConfusionMatrix c{static_cast<std::int64_t>(rng.index(50)), static_cast<std::int64_t>(rng.index(50)),
                              static_cast<std::int64_t>(rng.index(50)), static_cast<std::int64_t>(rng.index(50))};
      const Metrics m = metrics(c);
      if (m.precision + m.recall > 0) {
        CHECK(std::abs(m.f1 - 2 * m.precision * m.recall / (m.precision + m.recall)) <= 1e-9);
      }
      const auto total = c.tp + c.fp + c.tn + c.fn;
      if (total > 0) CHECK(m.accuracy == static_cast<double>(c.tp + c.tn) / static_cast<double>(total));
    }
  }

  TEST_CASE("mean and sample sd") {
    const std::vector<double> v{1, 2, 3, 4};
    const MeanSd m = mean_sd(v);
    CHECK(m.mean == 2.5);
    CHECK(m.sd == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
    CHECK(m.count == 4);
    const std::vector<double> one{7};
    CHECK(mean_sd(one).sd == 0.0);
  }
}

TEST_SUITE("roc") {
  TEST_CASE("worked example and edge cases") {
    const std::vector<double> s{0.9, 0.8, 0.7, 0.6};
    const std::vector<std::int32_t> y{1, 0, 1, 0};
    CHECK(roc_auc(s, y, 1).auc == 0.75);
    CHECK(oracle::oracle_auc_paircount(s, y, 1) == 0.75);

    const std::vector<std::int32_t> sorted{1, 1, 0, 0};
    CHECK(roc_auc(s, sorted, 1).auc == 1.0);
    CHECK(roc_auc(s, sorted, 0).auc == 0.0);
    CHECK(oracle::oracle_auc_paircount(s, sorted, 0) == 0.0);

    const std::vector<double> flat(4, 0.3);
    CHECK(roc_auc(flat, y, 1).auc == 0.5);

    const std::vector<std::int32_t> single(4, 1);
    CHECK(error_of([&] { roc_auc(s, single, 1); }) == code(ErrorCode::kSingleClassLabels));
    CHECK(error_of([&] { oracle::oracle_auc_paircount(s, single, 1); }) == code(ErrorCode::kSingleClassLabels));
  }

  TEST_CASE("matches pair counting on random and tie-heavy vectors") {
    Rng rng(31);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 2 + rng.index(49);
      auto y = random_labels(rng, n, 0.5);
      y[0] = 1;
      y[1] = 0;
      std::vector<double> s(n);
      const bool ties = trial % 2 == 0;
      const std::size_t distinct = 1 + rng.index(4);
      for (double& v : s) v = ties ? static_cast<double>(rng.index(distinct)) / 4.0 : rng.uniform();
      const RocResult r = roc_auc(s, y, 1);
      worst = std::max(worst, std::abs(r.auc - oracle::oracle_auc_paircount(s, y, 1)));

      const auto& pts = r.curve.points;
      REQUIRE(pts.size() >= 2);
      CHECK(pts.front().fpr == 0.0);
      CHECK(pts.front().tpr == 0.0);
      CHECK(pts.back().fpr == 1.0);
      CHECK(pts.back().tpr == 1.0);
      for (std::size_t i = 1; i < pts.size(); ++i) {
        CHECK(pts[i].fpr >= pts[i - 1].fpr);
        CHECK(pts[i].tpr >= pts[i - 1].tpr);
      }
    }
    CHECK(worst <= 1e-12);
  }

  TEST_CASE("invariant under increasing transforms") {
    Rng rng(32);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = 2 + rng.index(60);
      auto y = random_labels(rng, n, 0.4);
      y[0] = 1;
      y[1] = 0;
      std::vector<double> s(n), t(n);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = static_cast<double>(rng.index(10)) / 10.0;
        t[i] = std::exp(3.0 * s[i]) - 7.0;
      }
      CHECK(roc_auc(s, y, 1).auc == roc_auc(t, y, 1).auc);
    }
  }
}

TEST_SUITE("cross-validation") {
  TEST_CASE("a leaked target gives perfect out-of-fold scores") {
    Rng rng(41);
    std::vector<int> y(200);
    std::vector<std::string> leak;
    std::vector<double> noise;
    for (int& b : y) b = rng.uniform() < 0.3;
    for (int b : y) {
      leak.push_back(b ? "dead" : "alive");
      noise.push_back(rng.uniform());
    }
    const DataTable t = table({numeric("noise", noise), categorical("leak", leak), target(yes_no(y))});
    const std::vector<ModelSpec> specs{{Algorithm::kDecisionTree, {}, 1}};
    CvOptions opts;
    opts.seed = 5;
    const EvalReport r = evaluate_cv(t, specs, opts);
    REQUIRE(r.models.size() == 1);
    CHECK(r.models[0].pooled.auc == 1.0);
    CHECK(r.models[0].pooled.metrics.accuracy == 1.0);
    CHECK(r.models[0].pooled_reverse.auc == 1.0);
    CHECK(r.positive_class == "yes");
    CHECK(r.negative_class == "no");
    CHECK(r.models[0].folds.size() == 10);
  }

  TEST_CASE("shuffled labels give chance-level AUC for every model") {
    PlantedSpec spec;
    spec.n_rows = 2000;
    spec.seed = 8;
    spec.features = planted_features({1.0, 0.8, 0.6, 0.4});
    const DataTable planted = gen_planted_dataset(spec);
    std::vector<std::size_t> perm(planted.n_rows());
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(99);
    rng.shuffle(std::span<std::size_t>(perm));
    std::vector<Column> cols = planted.columns();
    Column& tgt = cols[planted.target()];
    std::vector<std::int32_t> codes(tgt.codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i) codes[i] = tgt.codes[perm[i]];
    tgt.codes = codes;
    const DataTable shuffled(std::move(cols));

    std::vector<ModelSpec> specs;
    for (Algorithm a : all_algorithms()) specs.push_back({a, {}, 3});
    CvOptions opts;
    opts.seed = 4;
    const EvalReport r = evaluate_cv(shuffled, specs, opts);
    for (const ModelReport& m : r.models) {
      INFO(display_name(m.spec.algorithm), " AUC ", m.pooled.auc);
      CHECK(m.pooled.auc >= 0.45);
      CHECK(m.pooled.auc <= 0.55);
    }
  }

  TEST_CASE("training never sees the scored rows") {
    PlantedSpec spec;
    spec.n_rows = 240;
    spec.seed = 12;
    spec.features = planted_features({0.7, 0.3});
    const DataTable t = gen_planted_dataset(spec);
    std::mutex mu;
    std::map<std::size_t, std::set<std::size_t>> fit_rows, score_rows;
    CvOptions opts;
    opts.k = 6;
    opts.seed = 2;
    opts.on_fit = [&](std::size_t fold, const DataTable& d) {
      std::lock_guard lock(mu);
      fit_rows[fold].insert(d.row_ids().begin(), d.row_ids().end());
    };
    opts.on_score = [&](std::size_t fold, const DataTable& d) {
      std::lock_guard lock(mu);
      score_rows[fold].insert(d.row_ids().begin(), d.row_ids().end());
    };
    std::vector<ModelSpec> specs;
    for (Algorithm a : all_algorithms()) specs.push_back({a, {}, 3});
    for (ModelSpec& s : specs) {
      if (s.algorithm == Algorithm::kRandomForest) s.hyperparameters["n_trees"] = 5;
    }
    evaluate_cv(t, specs, opts);
    REQUIRE(fit_rows.size() == 6);
    std::vector<int> scored(t.n_rows(), 0);
    for (std::size_t f = 0; f < 6; ++f) {
      for (std::size_t r : score_rows[f]) {
        CHECK(fit_rows[f].count(r) == 0);
        ++scored[r];
      }
      CHECK(fit_rows[f].size() + score_rows[f].size() == t.n_rows());
    }
    CHECK(std::all_of(scored.begin(), scored.end(), [](int s) { return s == 1; }));
  }

  TEST_CASE("reports are deterministic and internally consistent") {
    PlantedSpec spec;
    spec.n_rows = 300;
    spec.seed = 13;
    spec.features = planted_features({0.6, 0.3, 0.0});
    const DataTable t = gen_planted_dataset(spec);
    std::vector<ModelSpec> specs{{Algorithm::kRandomForest, {{"n_trees", 10}}, 7},
                                 {Algorithm::kLogisticRegression, {}, 7}};
    CvOptions opts;
    opts.k = 5;
    opts.seed = 21;
    const EvalReport a = evaluate_cv(t, specs, opts);
    const EvalReport b = evaluate_cv(t, specs, opts);
    for (std::size_t m = 0; m < specs.size(); ++m) {
      CHECK(a.models[m].out_of_fold_scores == b.models[m].out_of_fold_scores);
      const ScoredMetrics& p = a.models[m].pooled;
      CHECK(p.confusion.tp + p.confusion.fp + p.confusion.tn + p.confusion.fn == 300);
      CHECK(p.confusion.swapped() == a.models[m].pooled_reverse.confusion);
      if (p.metrics.precision + p.metrics.recall > 0) {
        CHECK(std::abs(p.metrics.f1 -
                       2 * p.metrics.precision * p.metrics.recall / (p.metrics.precision + p.metrics.recall)) <=
              1e-9);
      }
      for (double s : a.models[m].out_of_fold_scores) CHECK((s >= 0.0 && s <= 1.0));
    }
  }

  TEST_CASE("single-class target") {
    const DataTable t = table({numeric("x", {1, 2, 3, 4}), target({"yes", "yes", "yes", "yes"})});
    const std::vector<ModelSpec> specs{{Algorithm::kDecisionTree, {}, 1}};
    CvOptions opts;
    opts.k = 2;
    CHECK(error_of([&] { evaluate_cv(t, specs, opts); }) == code(ErrorCode::kSingleClassTraining));
  }

  TEST_CASE("unknown positive class") {
    const DataTable t = table({numeric("x", {1, 2, 3, 4}), target({"a", "b", "a", "b"})});
    const std::vector<ModelSpec> specs{{Algorithm::kDecisionTree, {}, 1}};
    CvOptions opts;
    opts.k = 2;
    CHECK(error_of([&] { evaluate_cv(t, specs, opts); }) == code(ErrorCode::kUnknownClass));
    opts.positive = "b";
    CHECK(evaluate_cv(t, specs, opts).positive_class == "b");
  }
}
