/*
 * Copyright 2026 The regime-xai Authors.
 *
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

#include "regime_xai/gbt/gbt.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"
#include "regime_xai/utils/status_macros.h"

namespace regime_xai::gbt {

double Tree::Predict(std::span<const double> row) const {
  return nodes[static_cast<size_t>(LeafIndex(row))].value;
}

int Tree::LeafIndex(std::span<const double> row) const {
  int n = 0;
  while (!nodes[n].is_leaf()) {
    const TreeNode& node = nodes[n];
    n = row[node.feature] <= node.threshold ? node.left : node.right;
  }
  return n;
}

int Tree::Depth() const {
  // Pre-order with children after parents: one forward pass suffices.
  std::vector<int> depth(nodes.size(), 0);
  int max_depth = 0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    max_depth = std::max(max_depth, depth[i]);
    if (!nodes[i].is_leaf()) {
      depth[nodes[i].left] = depth[i] + 1;
      depth[nodes[i].right] = depth[i] + 1;
    }
  }
  return max_depth;
}

int Tree::NumLeaves() const {
  return static_cast<int>(std::count_if(
      nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

absl::StatusOr<TreeEnsemble> TreeEnsemble::Create(
    double base_score, double learning_rate,
    std::vector<std::string> feature_names, std::vector<Tree> trees) {
  if (!std::isfinite(base_score)) {
    return absl::InvalidArgumentError("base_score must be finite");
  }
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("learning_rate must be in (0, 1], got ", learning_rate));
  }
  const int n_features = static_cast<int>(feature_names.size());
  for (size_t t = 0; t < trees.size(); ++t) {
    const auto& nodes = trees[t].nodes;
    if (nodes.empty()) {
      return absl::InvalidArgumentError(absl::StrCat("Tree ", t, " is empty"));
    }
    std::vector<int> parents(nodes.size(), 0);
    for (size_t i = 0; i < nodes.size(); ++i) {
      const TreeNode& n = nodes[i];
      if (n.is_leaf()) {
        if (!std::isfinite(n.value)) {
          return absl::InvalidArgumentError(
              absl::StrCat("Tree ", t, " node ", i, ": non-finite leaf value"));
        }
        continue;
      }
      if (n.feature < 0 || n.feature >= n_features) {
        return absl::InvalidArgumentError(
            absl::StrCat("Tree ", t, " node ", i, ": feature index ",
                         n.feature, " outside [0, ", n_features, ")"));
      }
      if (!std::isfinite(n.threshold)) {
        return absl::InvalidArgumentError(
            absl::StrCat("Tree ", t, " node ", i, ": non-finite threshold"));
      }
      for (int child : {n.left, n.right}) {
        if (child <= static_cast<int>(i) ||
            child >= static_cast<int>(nodes.size())) {
          return absl::InvalidArgumentError(absl::StrCat(
              "Tree ", t, " node ", i, ": invalid child index ", child));
        }
        if (++parents[child] > 1) {
          return absl::InvalidArgumentError(absl::StrCat(
              "Tree ", t, ": node ", child, " has more than one parent"));
        }
      }
    }
    for (size_t i = 1; i < nodes.size(); ++i) {
      if (parents[i] != 1) {
        return absl::InvalidArgumentError(
            absl::StrCat("Tree ", t, ": node ", i, " is unreachable"));
      }
    }
  }
  TreeEnsemble model;
  model.base_score_ = base_score;
  model.learning_rate_ = learning_rate;
  model.feature_names_ = std::move(feature_names);
  model.trees_ = std::move(trees);
  return model;
}

double TreeEnsemble::PredictRow(std::span<const double> row) const {
  double sum = 0.0;
  for (const Tree& tree : trees_) sum += tree.Predict(row);
  return base_score_ + learning_rate_ * sum;
}

std::vector<double> TreeEnsemble::PredictBatch(const DenseMatrix& x) const {
  std::vector<double> out(x.rows());
  for (size_t r = 0; r < x.rows(); ++r) out[r] = PredictRow(x.Row(r));
  return out;
}

TreeEnsemble TreeEnsemble::Prefix(size_t n) const {
  TreeEnsemble out = *this;
  out.trees_.resize(std::min(n, trees_.size()));
  return out;
}

bool TreeEnsemble::UsesFeature(int f) const {
  for (const Tree& tree : trees_) {
    for (const TreeNode& node : tree.nodes) {
      if (!node.is_leaf() && node.feature == f) return true;
    }
  }
  return false;
}

int TreeEnsemble::MaxDepth() const {
  int depth = 0;
  for (const Tree& tree : trees_) depth = std::max(depth, tree.Depth());
  return depth;
}

absl::Status GbtParams::Validate() const {
  if (n_trees < 1) return absl::InvalidArgumentError("n_trees must be >= 1");
  if (max_depth < 1) return absl::InvalidArgumentError("max_depth must be >= 1");
  if (min_samples_leaf < 1) {
    return absl::InvalidArgumentError("min_samples_leaf must be >= 1");
  }
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    return absl::InvalidArgumentError("learning_rate must be in (0, 1]");
  }
  return absl::OkStatus();
}

namespace {

struct Split {
  int feature = kLeaf;
  double threshold = 0.0;
  double gain = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const DenseMatrix& x, std::span<const double> residual,
              const GbtParams& params)
      : x_(x), residual_(residual), params_(params) {}

  Tree Build() {
    std::vector<size_t> rows(x_.rows());
    std::iota(rows.begin(), rows.end(), size_t{0});
    Tree tree;
    BuildNode(std::move(rows), 0, &tree);
    return tree;
  }

 private:
  int BuildNode(std::vector<size_t> rows, int depth, Tree* tree) {
    const int index = static_cast<int>(tree->nodes.size());
    tree->nodes.emplace_back();

    double sum = 0.0;
    for (size_t r : rows) sum += residual_[r];
    const double mean = sum / static_cast<double>(rows.size());
    tree->nodes[index].value = mean;

    const size_t min_leaf = static_cast<size_t>(params_.min_samples_leaf);
    if (depth >= params_.max_depth || rows.size() < 2 * min_leaf) return index;

    const Split split = FindSplit(rows, mean);
    if (split.feature == kLeaf) return index;

    std::vector<size_t> left, right;
    for (size_t r : rows) {
      (x_(r, split.feature) <= split.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = BuildNode(std::move(left), depth + 1, tree);
    const int rt = BuildNode(std::move(right), depth + 1, tree);
    TreeNode& node = tree->nodes[index];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = rt;
    node.value = 0.0;
    return index;
  }

  // Exact greedy search. Residuals are centered on the node mean so the gain
  // sL^2/nL + sR^2/nR (parent term is ~0) is computed without cancellation.
  Split FindSplit(const std::vector<size_t>& rows, double mean) const {
    const size_t n = rows.size();
    const size_t min_leaf = static_cast<size_t>(params_.min_samples_leaf);
    double sse = 0.0;
    for (size_t r : rows) sse += (residual_[r] - mean) * (residual_[r] - mean);
    Split best;
    if (!(sse > 0.0)) return best;
    const double min_gain = 1e-10 * sse;

    std::vector<size_t> order(rows);
    for (size_t f = 0; f < x_.cols(); ++f) {
      std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const double va = x_(a, f), vb = x_(b, f);
        return va < vb || (va == vb && a < b);
      });
      double centered_total = 0.0;
      for (size_t r : order) centered_total += residual_[r] - mean;
      double left_sum = 0.0;
      for (size_t i = 0; i + 1 < n; ++i) {
        left_sum += residual_[order[i]] - mean;
        const size_t n_left = i + 1;
        if (n_left < min_leaf) continue;
        if (n - n_left < min_leaf) break;
        const double lo = x_(order[i], f);
        const double hi = x_(order[i + 1], f);
        if (lo == hi) continue;
        const double right_sum = centered_total - left_sum;
        const double gain =
            left_sum * left_sum / static_cast<double>(n_left) +
            right_sum * right_sum / static_cast<double>(n - n_left) -
            centered_total * centered_total / static_cast<double>(n);
        if (gain > min_gain && gain > best.gain) {
          double threshold = lo + (hi - lo) / 2.0;
          if (!(threshold < hi)) threshold = lo;
          best = {static_cast<int>(f), threshold, gain};
        }
      }
    }
    return best;
  }

  const DenseMatrix& x_;
  std::span<const double> residual_;
  const GbtParams& params_;
};

}  // namespace

absl::StatusOr<TreeEnsemble> FitGbt(const DenseMatrix& x,
                                    std::span<const double> y,
                                    const GbtParams& params,
                                    std::vector<std::string> feature_names) {
  RETURN_IF_ERROR(params.Validate());
  if (x.rows() == 0) {
    return absl::InvalidArgumentError("FitGbt: empty training set");
  }
  if (x.rows() != y.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "FitGbt: ", x.rows(), " rows but ", y.size(), " targets"));
  }
  if (feature_names.empty()) {
    for (size_t f = 0; f < x.cols(); ++f) {
      feature_names.push_back(absl::StrCat("f", f));
    }
  }
  if (feature_names.size() != x.cols()) {
    return absl::InvalidArgumentError("FitGbt: feature name count mismatch");
  }
  const auto& xv = x.values();
  if (std::any_of(xv.begin(), xv.end(), [](double v) { return !std::isfinite(v); }) ||
      std::any_of(y.begin(), y.end(), [](double v) { return !std::isfinite(v); })) {
    return absl::InvalidArgumentError("FitGbt: training data has missing cells");
  }

  const bool constant = std::all_of(y.begin(), y.end(),
                                    [&](double v) { return v == y.front(); });
  const double base =
      constant ? y.front()
               : std::accumulate(y.begin(), y.end(), 0.0) /
                     static_cast<double>(y.size());

  std::vector<Tree> trees;
  if (!constant) {
    std::vector<double> pred(y.size(), base);
    std::vector<double> residual(y.size());
    for (int m = 0; m < params.n_trees; ++m) {
      for (size_t i = 0; i < y.size(); ++i) residual[i] = y[i] - pred[i];
      Tree tree = TreeBuilder(x, residual, params).Build();
      if (tree.nodes.size() == 1) break;
      for (size_t i = 0; i < y.size(); ++i) {
        pred[i] += params.learning_rate * tree.Predict(x.Row(i));
      }
      trees.push_back(std::move(tree));
    }
  }
  return TreeEnsemble::Create(base, params.learning_rate,
                              std::move(feature_names), std::move(trees));
}

absl::StatusOr<TreeEnsemble> FitGbt(const timeseries::FeatureMatrix& train,
                                    const GbtParams& params) {
  return FitGbt(train.x, train.y, params, train.feature_names);
}

absl::StatusOr<std::vector<double>> PredictGbt(const TreeEnsemble& model,
                                               const DenseMatrix& x) {
  if (x.cols() != model.num_features()) {
    return absl::InvalidArgumentError(
        absl::StrCat("PredictGbt: input has ", x.cols(),
                     " columns, model expects ", model.num_features()));
  }
  return model.PredictBatch(x);
}

}  // namespace regime_xai::gbt
