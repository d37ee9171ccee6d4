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

#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "nlohmann/json.hpp"
#include "regime_xai/gbt/gbt.h"
#include "regime_xai/utils/status_macros.h"

namespace regime_xai::gbt {
namespace {

using nlohmann::json;

constexpr char kFormat[] = "regime_xai.tree_ensemble";
constexpr int kFormatVersion = 1;
constexpr int kMaxNesting = 256;

json NodeToJson(const Tree& tree, int index) {
  const TreeNode& node = tree.nodes[index];
  if (node.is_leaf()) return json{{"value", node.value}};
  return json{{"feature", node.feature},
              {"threshold", node.threshold},
              {"left", NodeToJson(tree, node.left)},
              {"right", NodeToJson(tree, node.right)}};
}

absl::StatusOr<double> GetNumber(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    return absl::InvalidArgumentError(
        absl::StrCat("Missing or non-numeric field '", key, "'"));
  }
  return it->get<double>();
}

// Appends the subtree rooted at `j` in pre-order and returns its index.
absl::StatusOr<int> NodeFromJson(const json& j, int nesting, Tree* tree) {
  if (nesting > kMaxNesting) {
    return absl::InvalidArgumentError("Tree nesting too deep");
  }
  if (!j.is_object()) return absl::InvalidArgumentError("Node is not an object");
  const int index = static_cast<int>(tree->nodes.size());
  tree->nodes.emplace_back();
  if (j.contains("value")) {
    if (j.size() != 1) {
      return absl::InvalidArgumentError("Leaf node has extra fields");
    }
    ASSIGN_OR_RETURN(tree->nodes[index].value, GetNumber(j, "value"));
    return index;
  }
  if (j.size() != 4 || !j.contains("left") || !j.contains("right")) {
    return absl::InvalidArgumentError(
        "Internal node needs exactly feature, threshold, left, right");
  }
  auto feature = j.find("feature");
  if (feature == j.end() || !feature->is_number_integer()) {
    return absl::InvalidArgumentError("Internal node needs an integer feature");
  }
  ASSIGN_OR_RETURN(const double threshold, GetNumber(j, "threshold"));
  ASSIGN_OR_RETURN(const int left, NodeFromJson(j["left"], nesting + 1, tree));
  ASSIGN_OR_RETURN(const int right, NodeFromJson(j["right"], nesting + 1, tree));
  TreeNode& node = tree->nodes[index];
  node.feature = feature->get<int>();
  node.threshold = threshold;
  node.left = left;
  node.right = right;
  return index;
}

}  // namespace

std::string SerializeTreeEnsemble(const TreeEnsemble& model) {
  json trees = json::array();
  for (const Tree& tree : model.trees()) trees.push_back(NodeToJson(tree, 0));
  const json j{{"format", kFormat},
               {"version", kFormatVersion},
               {"base_score", model.base_score()},
               {"learning_rate", model.learning_rate()},
               {"feature_names", model.feature_names()},
               {"trees", std::move(trees)}};
  return j.dump();
}

absl::StatusOr<TreeEnsemble> ParseTreeEnsemble(absl::string_view text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("Tree ensemble: malformed JSON");
  }
  if (j.value("format", "") != kFormat || j.value("version", 0) != kFormatVersion) {
    return absl::InvalidArgumentError(
        absl::StrCat("Tree ensemble: expected format ", kFormat, " v",
                     kFormatVersion));
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "format" && key != "version" && key != "base_score" &&
        key != "learning_rate" && key != "feature_names" && key != "trees") {
      return absl::InvalidArgumentError(
          absl::StrCat("Tree ensemble: unknown field '", key, "'"));
    }
  }
  ASSIGN_OR_RETURN(const double base_score, GetNumber(j, "base_score"));
  ASSIGN_OR_RETURN(const double learning_rate, GetNumber(j, "learning_rate"));
  auto names = j.find("feature_names");
  auto trees_json = j.find("trees");
  if (names == j.end() || !names->is_array() || trees_json == j.end() ||
      !trees_json->is_array()) {
    return absl::InvalidArgumentError(
        "Tree ensemble: feature_names and trees must be arrays");
  }
  std::vector<std::string> feature_names;
  for (const auto& n : *names) {
    if (!n.is_string()) {
      return absl::InvalidArgumentError("Tree ensemble: non-string feature name");
    }
    feature_names.push_back(n.get<std::string>());
  }
  std::vector<Tree> trees;
  for (size_t t = 0; t < trees_json->size(); ++t) {
    Tree tree;
    auto root = NodeFromJson((*trees_json)[t], 0, &tree);
    if (!root.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("Tree ", t, ": ", root.status().message()));
    }
    trees.push_back(std::move(tree));
  }
  return TreeEnsemble::Create(base_score, learning_rate,
                              std::move(feature_names), std::move(trees));
}

}  // namespace regime_xai::gbt
