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

#include <utility>
#include <vector>

#include "regime_xai/shap/shap.h"
#include "regime_xai/utils/status_macros.h"

namespace regime_xai::shap {
namespace {

// Single-reference game for one tree: v(S) = tree(x_S, z_{not S}). A leaf is
// reached by the hybrid row exactly when S contains every feature the path
// routed by x (set X) and none routed by z (set Z). Its Shapley weights are
//   member of X: (|X|-1)! |Z|! / (|X|+|Z|)!
//   member of Z: -|X|! (|Z|-1)! / (|X|+|Z|)!
// weight(p, q) below is p! q! / (p+q+1)!.
class WeightTable {
 public:
  explicit WeightTable(int max_players) : size_(max_players + 1) {
    std::vector<double> fact(2 * size_ + 2, 1.0);
    for (size_t i = 1; i < fact.size(); ++i) {
      fact[i] = fact[i - 1] * static_cast<double>(i);
    }
    table_.resize(size_ * size_);
    for (size_t p = 0; p < size_; ++p) {
      for (size_t q = 0; q < size_; ++q) {
        table_[p * size_ + q] = fact[p] * fact[q] / fact[p + q + 1];
      }
    }
  }
  double operator()(int p, int q) const {
    return table_[static_cast<size_t>(p) * size_ + static_cast<size_t>(q)];
  }

 private:
  size_t size_;
  std::vector<double> table_;
};

class SingleReferenceWalker {
 public:
  SingleReferenceWalker(const gbt::Tree& tree, std::span<const double> x,
                        std::span<const double> z, const WeightTable& weights,
                        std::span<double> phi)
      : tree_(tree),
        x_(x),
        z_(z),
        weights_(weights),
        phi_(phi),
        in_x_(x.size(), 0),
        in_z_(x.size(), 0) {}

  void Run() { Visit(0); }

 private:
  struct Mass {
    double x_side = 0.0;  // summed weight * value for members of X
    double z_side = 0.0;  // summed |weight| * value for members of Z
  };

  Mass Visit(int index) {
    const gbt::TreeNode& node = tree_.nodes[static_cast<size_t>(index)];
    if (node.is_leaf()) {
      Mass m;
      if (n_x_ > 0) m.x_side = weights_(n_x_ - 1, n_z_) * node.value;
      if (n_z_ > 0) m.z_side = weights_(n_x_, n_z_ - 1) * node.value;
      return m;
    }
    const size_t f = static_cast<size_t>(node.feature);
    const int x_child = x_[f] <= node.threshold ? node.left : node.right;
    const int z_child = z_[f] <= node.threshold ? node.left : node.right;
    if (x_child == z_child) return Visit(x_child);
    // Feature already assigned on this path: the hybrid row is forced.
    if (in_x_[f] > 0) return Visit(x_child);
    if (in_z_[f] > 0) return Visit(z_child);

    ++in_x_[f];
    ++n_x_;
    const Mass via_x = Visit(x_child);
    --in_x_[f];
    --n_x_;

    ++in_z_[f];
    ++n_z_;
    const Mass via_z = Visit(z_child);
    --in_z_[f];
    --n_z_;

    phi_[f] += via_x.x_side - via_z.z_side;
    return {via_x.x_side + via_z.x_side, via_x.z_side + via_z.z_side};
  }

  const gbt::Tree& tree_;
  std::span<const double> x_;
  std::span<const double> z_;
  const WeightTable& weights_;
  std::span<double> phi_;
  std::vector<int> in_x_;
  std::vector<int> in_z_;
  int n_x_ = 0;
  int n_z_ = 0;
};

}  // namespace

absl::StatusOr<ShapRow> TreeShap(const gbt::TreeEnsemble& model,
                                 std::span<const double> x,
                                 const Background& bg) {
  const size_t n = model.num_features();
  if (x.size() != n || bg.num_features() != n) {
    return absl::InvalidArgumentError(
        "TreeShap: row/background width does not match the ensemble");
  }
  // Distinct features on a path never exceed the depth.
  const WeightTable weights(model.MaxDepth());

  ShapRow out;
  out.phi.assign(n, 0.0);
  std::vector<double> acc(n, 0.0);
  double ref_sum = 0.0;
  for (size_t b = 0; b < bg.size(); ++b) {
    const auto z = bg.rows().Row(b);
    for (const gbt::Tree& tree : model.trees()) {
      SingleReferenceWalker(tree, x, z, weights, acc).Run();
    }
    ref_sum += model.PredictRow(z);
  }
  const double scale = model.learning_rate() / static_cast<double>(bg.size());
  for (size_t j = 0; j < n; ++j) out.phi[j] = acc[j] * scale;
  out.phi0 = ref_sum / static_cast<double>(bg.size());
  out.prediction = model.PredictRow(x);
  return out;
}

}  // namespace regime_xai::shap
