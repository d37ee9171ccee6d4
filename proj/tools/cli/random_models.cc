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

#include "cli/random_models.h"

#include <utility>

namespace regime_xai::cli {
namespace {

void GrowNode(Rng& rng, size_t num_features, int depth_left,
              std::vector<gbt::TreeNode>& nodes) {
  const size_t index = nodes.size();
  nodes.emplace_back();
  // Deeper nodes are more likely to stop; the root always splits.
  const bool split =
      depth_left > 0 && (index == 0 || rng.Uniform01() < 0.75);
  if (!split) {
    nodes[index].value = rng.Uniform(-1.0, 1.0);
    return;
  }
  nodes[index].feature = static_cast<int>(rng.UniformIndex(num_features));
  nodes[index].threshold = rng.Normal();
  nodes[index].left = static_cast<int>(nodes.size());
  GrowNode(rng, num_features, depth_left - 1, nodes);
  nodes[index].right = static_cast<int>(nodes.size());
  GrowNode(rng, num_features, depth_left - 1, nodes);
}

}  // namespace

DenseMatrix RandomMatrix(Rng& rng, size_t rows, size_t cols) {
  DenseMatrix m(rows, cols);
  for (double& v : m.mutable_values()) v = rng.Normal();
  return m;
}

gbt::TreeEnsemble RandomTreeEnsemble(Rng& rng, size_t num_features,
                                     int max_depth, int n_trees) {
  std::vector<gbt::Tree> trees;
  for (int t = 0; t < n_trees; ++t) {
    gbt::Tree tree;
    GrowNode(rng, num_features, max_depth, tree.nodes);
    trees.push_back(std::move(tree));
  }
  std::vector<std::string> names;
  for (size_t f = 0; f < num_features; ++f) names.push_back("f" + std::to_string(f));
  auto ensemble = gbt::TreeEnsemble::Create(rng.Normal(), rng.Uniform(0.1, 1.0),
                                            std::move(names), std::move(trees));
  // The generator only produces valid structures.
  return *std::move(ensemble);
}

mlp::MlpNet RandomMlp(Rng& rng, std::vector<int> layer_sizes) {
  mlp::MlpNet net = mlp::MlpNet::Initialize(std::move(layer_sizes), rng.NextU64());
  for (auto& b : net.biases) {
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = rng.Uniform(-0.5, 0.5);
  }
  return net;
}

}  // namespace regime_xai::cli
