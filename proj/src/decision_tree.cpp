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
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "model_internal.hpp"
#include "tabrank/error.hpp"

namespace tabrank {

double Tree::score(std::span<const double> row) const {
  std::size_t at = 0;
  while (true) {
    const TreeNode& node = nodes[at];
    if (node.feature < 0) return node.positive_rate();
    const double v = row[static_cast<std::size_t>(node.feature)];
    std::int32_t next;
    if (node.fallback < 0) {
      next = v <= node.threshold ? node.children[0] : node.children[1];
    } else {
      next = (v >= 0 && v < static_cast<double>(node.children.size()))
                 ? node.children[static_cast<std::size_t>(v)]
                 : -1;
      if (next < 0) next = node.fallback;
    }
    at = static_cast<std::size_t>(next);
  }
}

std::size_t Tree::depth() const {
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  std::size_t best = 0;
  while (!stack.empty()) {
    auto [at, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    const TreeNode& node = nodes[at];
    if (node.feature < 0) continue;
    for (std::int32_t child : node.children) {
      if (child >= 0) stack.emplace_back(static_cast<std::size_t>(child), d + 1);
    }
  }
  return best;
}

namespace detail {

namespace {

double binary_entropy(std::int64_t pos, std::int64_t total) {
  if (pos == 0 || pos == total) return 0.0;
  const double p = static_cast<double>(pos) / static_cast<double>(total);
  const double q = static_cast<double>(total - pos) / static_cast<double>(total);
  return -(p * std::log2(p) + q * std::log2(q));
}

struct Split {
  std::int32_t feature = -1;
  double threshold = 0.0;
  double gain = -1.0;
};

struct Work {
  std::size_t node;
  std::vector<std::size_t> rows;
  std::size_t depth;
};

class TreeGrower {
 public:
  TreeGrower(const TrainingData& data, const TreeParams& params, Rng* rng)
      : data_(data), params_(params), rng_(rng) {}

  Tree grow(std::vector<std::size_t> rows) {
    Tree tree;
    tree.nodes.emplace_back();
    std::vector<Work> stack;
    stack.push_back({0, std::move(rows), 0});
    while (!stack.empty()) {
      Work work = std::move(stack.back());
      stack.pop_back();
      expand(tree, std::move(work), stack);
    }
    return tree;
  }

 private:
  std::vector<std::size_t> candidate_features() {
    const std::size_t d = data_.schema.features.size();
    std::vector<std::size_t> all(d);
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (params_.max_features == 0 || params_.max_features >= d || rng_ == nullptr) return all;
    // Partial Fisher-Yates, then restore schema order so ties break the same
    // way as in a single tree.
    for (std::size_t i = 0; i < params_.max_features; ++i) {
      std::swap(all[i], all[i + rng_->index(d - i)]);
    }
    all.resize(params_.max_features);
    std::sort(all.begin(), all.end());
    return all;
  }

  double value(std::size_t row, std::size_t feature) const {
    return data_.x.values[row * data_.x.n_features + feature];
  }

  void consider_numeric(std::size_t f, const std::vector<std::size_t>& rows, std::int64_t pos,
                        double parent_h, Split& best) {
    std::vector<std::pair<double, std::uint8_t>> pairs;
    pairs.reserve(rows.size());
    for (std::size_t r : rows) pairs.emplace_back(value(r, f), data_.target.is_positive[r]);
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const auto n = static_cast<std::int64_t>(pairs.size());
    std::int64_t left_n = 0;
    std::int64_t left_pos = 0;
    for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
      ++left_n;
      left_pos += pairs[i].second;
      const double lo = pairs[i].first;
      const double hi = pairs[i + 1].first;
      if (!(lo < hi)) continue;
      const std::int64_t right_n = n - left_n;
      const std::int64_t right_pos = pos - left_pos;
      const double h = (static_cast<double>(left_n) * binary_entropy(left_pos, left_n) +
                        static_cast<double>(right_n) * binary_entropy(right_pos, right_n)) /
                       static_cast<double>(n);
      const double gain = std::max(0.0, parent_h - h);
      if (gain > best.gain) {
        double mid = lo + (hi - lo) / 2.0;
        if (!(mid < hi)) mid = lo;
        best = {static_cast<std::int32_t>(f), mid, gain};
      }
    }
  }

  void consider_categorical(std::size_t f, const std::vector<std::size_t>& rows, double parent_h,
                            Split& best) {
    const std::size_t n_levels = data_.schema.features[f].levels.size();
    std::vector<std::int64_t> total(n_levels, 0);
    std::vector<std::int64_t> pos(n_levels, 0);
    for (std::size_t r : rows) {
      const auto code = static_cast<std::size_t>(value(r, f));
      ++total[code];
      pos[code] += data_.target.is_positive[r];
    }
    std::size_t present = 0;
    double h = 0.0;
    for (std::size_t l = 0; l < n_levels; ++l) {
      if (total[l] == 0) continue;
      ++present;
      h += static_cast<double>(total[l]) * binary_entropy(pos[l], total[l]);
    }
    if (present < 2) return;
    const double gain = std::max(0.0, parent_h - h / static_cast<double>(rows.size()));
    if (gain > best.gain) best = {static_cast<std::int32_t>(f), 0.0, gain};
  }

  void expand(Tree& tree, Work work, std::vector<Work>& stack) {
    std::int64_t pos = 0;
    for (std::size_t r : work.rows) pos += data_.target.is_positive[r];
    const auto total = static_cast<std::int64_t>(work.rows.size());
    {
      TreeNode& node = tree.nodes[work.node];
      node.positives = pos;
      node.total = total;
    }
    if (pos == 0 || pos == total || work.depth >= params_.max_depth ||
        work.rows.size() < params_.min_samples_split) {
      return;
    }
    const double parent_h = binary_entropy(pos, total);
    Split best;
    for (std::size_t f : candidate_features()) {
      if (data_.schema.features[f].kind == ColumnKind::kNumeric) {
        consider_numeric(f, work.rows, pos, parent_h, best);
      } else {
        consider_categorical(f, work.rows, parent_h, best);
      }
    }
    if (best.feature < 0) return;

    const auto f = static_cast<std::size_t>(best.feature);
    std::vector<std::vector<std::size_t>> parts;
    std::vector<std::int32_t> children;
    std::int32_t fallback = -1;
    if (data_.schema.features[f].kind == ColumnKind::kNumeric) {
      parts.resize(2);
      for (std::size_t r : work.rows) parts[value(r, f) <= best.threshold ? 0 : 1].push_back(r);
    } else {
      parts.resize(data_.schema.features[f].levels.size());
      for (std::size_t r : work.rows) parts[static_cast<std::size_t>(value(r, f))].push_back(r);
      fallback = static_cast<std::int32_t>(tree.nodes.size());
      TreeNode leaf;
      leaf.positives = pos;
      leaf.total = total;
      tree.nodes.push_back(std::move(leaf));
    }
    for (std::size_t p = 0; p < parts.size(); ++p) {
      if (parts[p].empty()) {
        children.push_back(-1);
        continue;
      }
      const auto child = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.emplace_back();
      children.push_back(child);
      stack.push_back({static_cast<std::size_t>(child), std::move(parts[p]), work.depth + 1});
    }
    TreeNode& node = tree.nodes[work.node];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.children = std::move(children);
    node.fallback = fallback;
  }

  const TrainingData& data_;
  TreeParams params_;
  Rng* rng_;
};

}  // namespace

Tree grow_tree(const TrainingData& data, std::vector<std::size_t> rows, const TreeParams& params, Rng* rng) {
  return TreeGrower(data, params, rng).grow(std::move(rows));
}

}  // namespace detail

namespace {

detail::TreeParams tree_params(const ModelSpec& spec) {
  detail::TreeParams p;
  p.max_depth = static_cast<std::size_t>(spec.param("max_depth"));
  p.min_samples_split = static_cast<std::size_t>(spec.param("min_samples_split"));
  return p;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace

TrainedModel train_decision_tree(const DataTable& train, const ModelSpec& spec, std::string_view positive) {
  if (spec.algorithm != Algorithm::kDecisionTree) throw Error(ErrorCode::kInvalidSpec, "spec is not a decision tree");
  validate(spec);
  const detail::TrainingData data = detail::prepare_training(train, positive, false, spec.algorithm);
  TrainedModel model = detail::make_model(spec, data);
  model.params = TreeModel{detail::grow_tree(data, all_rows(data.x.n_rows), tree_params(spec), nullptr)};
  return model;
}

TrainedModel train_random_forest(const DataTable& train, const ModelSpec& spec, std::string_view positive) {
  if (spec.algorithm != Algorithm::kRandomForest) throw Error(ErrorCode::kInvalidSpec, "spec is not a random forest");
  validate(spec);
  const detail::TrainingData data = detail::prepare_training(train, positive, false, spec.algorithm);
  TrainedModel model = detail::make_model(spec, data);

  detail::TreeParams params = tree_params(spec);
  const std::size_t d = data.schema.features.size();
  const auto requested = static_cast<std::size_t>(spec.param("max_features"));
  params.max_features = requested == 0 ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))))
                                       : std::min(requested, d);
  const bool bootstrap = spec.param("bootstrap") != 0;
  const auto n_trees = static_cast<std::size_t>(spec.param("n_trees"));
  const std::size_t n = data.x.n_rows;

  ForestModel forest;
  forest.trees.resize(n_trees);
  // Every tree owns a generator derived from (seed, tree index), so the
  // result does not depend on how trees are spread over threads.
  const auto build = [&](std::size_t t) {
    Rng rng(derive_seed(spec.seed, t));
    std::vector<std::size_t> rows;
    if (bootstrap) {
      rows.resize(n);
      for (std::size_t& r : rows) r = rng.index(n);
    } else {
      rows = all_rows(n);
    }
    forest.trees[t] = detail::grow_tree(data, std::move(rows), params, &rng);
  };
  const std::size_t workers =
      std::min<std::size_t>(n_trees, std::max<unsigned>(1, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t w = 0; w + 1 < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t t = next++; t < n_trees; t = next++) build(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        failure = std::current_exception();
      }
    });
  }
  try {
    for (std::size_t t = next++; t < n_trees; t = next++) build(t);
  } catch (...) {
    std::lock_guard lock(failure_mutex);
    failure = std::current_exception();
  }
  for (std::thread& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  model.params = std::move(forest);
  return model;
}

}  // namespace tabrank
