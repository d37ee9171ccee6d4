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
#include "regime_xai/mlp/mlp.h"
#include "regime_xai/utils/status_macros.h"

namespace regime_xai::mlp {
namespace {

using nlohmann::json;

constexpr char kFormat[] = "regime_xai.mlp";
constexpr int kFormatVersion = 1;

absl::StatusOr<std::vector<double>> NumberArray(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array()) {
    return absl::InvalidArgumentError(absl::StrCat("Missing array '", key, "'"));
  }
  std::vector<double> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat("Non-numeric entry in '", key, "'"));
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string SerializeMlpNet(const MlpNet& net) {
  json layers = json::array();
  for (size_t l = 0; l < net.weights.size(); ++l) {
    const Eigen::MatrixXd& w = net.weights[l];
    std::vector<double> row_major;
    row_major.reserve(static_cast<size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) row_major.push_back(w(r, c));
    }
    std::vector<double> b(net.biases[l].data(),
                          net.biases[l].data() + net.biases[l].size());
    layers.push_back(json{{"weights", std::move(row_major)}, {"biases", std::move(b)}});
  }
  const json j{{"format", kFormat},
               {"version", kFormatVersion},
               {"activation", "relu"},
               {"layer_sizes", net.layer_sizes},
               {"feature_names", net.feature_names},
               {"input_mean", net.input_mean},
               {"input_std", net.input_std},
               {"layers", std::move(layers)}};
  return j.dump();
}

absl::StatusOr<MlpNet> ParseMlpNet(absl::string_view text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("MLP: malformed JSON");
  }
  if (j.value("format", "") != kFormat || j.value("version", 0) != kFormatVersion ||
      j.value("activation", "") != "relu") {
    return absl::InvalidArgumentError(
        absl::StrCat("MLP: expected format ", kFormat, " v", kFormatVersion));
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "format" && key != "version" && key != "activation" &&
        key != "layer_sizes" && key != "feature_names" && key != "input_mean" &&
        key != "input_std" && key != "layers") {
      return absl::InvalidArgumentError(absl::StrCat("MLP: unknown field '", key, "'"));
    }
  }
  MlpNet net;
  auto sizes = j.find("layer_sizes");
  auto names = j.find("feature_names");
  auto layers = j.find("layers");
  if (sizes == j.end() || !sizes->is_array() || names == j.end() ||
      !names->is_array() || layers == j.end() || !layers->is_array()) {
    return absl::InvalidArgumentError(
        "MLP: layer_sizes, feature_names and layers must be arrays");
  }
  for (const auto& s : *sizes) {
    if (!s.is_number_integer()) {
      return absl::InvalidArgumentError("MLP: non-integer layer size");
    }
    net.layer_sizes.push_back(s.get<int>());
  }
  for (const auto& n : *names) {
    if (!n.is_string()) return absl::InvalidArgumentError("MLP: bad feature name");
    net.feature_names.push_back(n.get<std::string>());
  }
  ASSIGN_OR_RETURN(net.input_mean, NumberArray(j, "input_mean"));
  ASSIGN_OR_RETURN(net.input_std, NumberArray(j, "input_std"));
  if (net.layer_sizes.size() < 2 || layers->size() != net.layer_sizes.size() - 1) {
    return absl::InvalidArgumentError("MLP: layer count mismatch");
  }
  for (size_t l = 0; l < layers->size(); ++l) {
    const json& layer = (*layers)[l];
    if (!layer.is_object() || layer.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("MLP: layer ", l, " must hold exactly weights and biases"));
    }
    ASSIGN_OR_RETURN(const std::vector<double> w, NumberArray(layer, "weights"));
    ASSIGN_OR_RETURN(const std::vector<double> b, NumberArray(layer, "biases"));
    const int rows = net.layer_sizes[l + 1];
    const int cols = net.layer_sizes[l];
    if (rows < 1 || cols < 1 ||
        w.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols) ||
        b.size() != static_cast<size_t>(rows)) {
      return absl::InvalidArgumentError(
          absl::StrCat("MLP: layer ", l, " array sizes do not match layer_sizes"));
    }
    Eigen::MatrixXd wm(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        wm(r, c) = w[static_cast<size_t>(r) * static_cast<size_t>(cols) +
                     static_cast<size_t>(c)];
      }
    }
    net.weights.push_back(std::move(wm));
    net.biases.push_back(Eigen::Map<const Eigen::VectorXd>(
        b.data(), static_cast<Eigen::Index>(b.size())));
  }
  RETURN_IF_ERROR(net.Validate());
  return net;
}

}  // namespace regime_xai::mlp
