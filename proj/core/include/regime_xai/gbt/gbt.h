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

#ifndef REGIME_XAI_GBT_GBT_H_
#define REGIME_XAI_GBT_GBT_H_

#include <cstdint>
#include <span>
#include <string>

#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "regime_xai/timeseries/feature_matrix.h"
#include "regime_xai/utils/dense_matrix.h"

namespace regime_xai::gbt {

inline constexpr int kLeaf = -1;

// One node of a regression tree. Internal nodes route a row left iff
// row[feature] <= threshold. Leaves carry the (unscaled) leaf value.
struct TreeNode {
  int feature = kLeaf;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature == kLeaf; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Flat pre-order node array; nodes[0] is the root and children always have a
// larger index than their parent.
struct Tree {
  std::vector<TreeNode> nodes;

  double Predict(std::span<const double> row) const;
  // Index of the leaf reached by `row`.
  int LeafIndex(std::span<const double> row) const;
  // Edges on the longest root-to-leaf path (0 for a single leaf).
  int Depth() const;
  int NumLeaves() const;

  friend bool operator==(const Tree&, const Tree&) = default;
};

// prediction(x) = base_score + learning_rate * sum_m tree_m(x)
class TreeEnsemble {
 public:
  TreeEnsemble() = default;

  // Validates learning rate, node links and feature indices.
  static absl::StatusOr<TreeEnsemble> Create(
      double base_score, double learning_rate,
      std::vector<std::string> feature_names, std::vector<Tree> trees);

  double base_score() const { return base_score_; }
  double learning_rate() const { return learning_rate_; }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }
  size_t num_features() const { return feature_names_.size(); }
  const std::vector<Tree>& trees() const { return trees_; }

  // Unchecked: row.size() must equal num_features().
  double PredictRow(std::span<const double> row) const;
  std::vector<double> PredictBatch(const DenseMatrix& x) const;

  // The ensemble truncated to its first n trees (stage n of boosting).
  TreeEnsemble Prefix(size_t n) const;

  // True if any split in any tree tests feature `f`.
  bool UsesFeature(int f) const;
  int MaxDepth() const;

  friend bool operator==(const TreeEnsemble&, const TreeEnsemble&) = default;

 private:
  double base_score_ = 0.0;
  double learning_rate_ = 1.0;
  std::vector<std::string> feature_names_;
  std::vector<Tree> trees_;
};

struct GbtParams {
  int n_trees = 300;
  int max_depth = 4;
  int min_samples_leaf = 20;
  double learning_rate = 0.1;
  // Reserved for row/column subsampling. The exact greedy fit breaks split
  // ties by (feature index, threshold) and draws no random numbers.
  uint64_t seed = 0;

  absl::Status Validate() const;
};

// Squared-loss gradient boosting. Stage m fits a depth-limited tree to the
// residuals y - F_{m-1}(x) with exact greedy variance-reduction splits over
// sorted unique values; leaf value = mean residual. Boosting stops early once
// no split reduces the loss (e.g. constant targets yield zero trees).
absl::StatusOr<TreeEnsemble> FitGbt(const DenseMatrix& x,
                                    std::span<const double> y,
                                    const GbtParams& params,
                                    std::vector<std::string> feature_names = {});
absl::StatusOr<TreeEnsemble> FitGbt(const timeseries::FeatureMatrix& train,
                                    const GbtParams& params);

// Checked batch prediction.
absl::StatusOr<std::vector<double>> PredictGbt(const TreeEnsemble& model,
                                               const DenseMatrix& x);

// JSON interchange. Numbers are written so that parsing restores every double
// bit-for-bit.
std::string SerializeTreeEnsemble(const TreeEnsemble& model);
absl::StatusOr<TreeEnsemble> ParseTreeEnsemble(absl::string_view json);

}  // namespace regime_xai::gbt

#endif  // REGIME_XAI_GBT_GBT_H_
