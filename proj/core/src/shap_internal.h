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

#ifndef REGIME_XAI_SRC_SHAP_INTERNAL_H_
#define REGIME_XAI_SRC_SHAP_INTERNAL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "regime_xai/shap/shap.h"

namespace regime_xai::shap::internal {

// Coalitions stored row-wise: coalition c occupies masks[c*n, (c+1)*n).
struct CoalitionSet {
  size_t n_features = 0;
  std::vector<uint8_t> masks;

  size_t size() const { return n_features == 0 ? 0 : masks.size() / n_features; }
  std::span<const uint8_t> Get(size_t c) const {
    return {masks.data() + c * n_features, n_features};
  }
  void Add(std::span<const uint8_t> mask) {
    masks.insert(masks.end(), mask.begin(), mask.end());
  }
};

// v(S) for every coalition, predicting in bounded batches.
std::vector<double> CoalitionValues(const Model& model,
                                    std::span<const double> x,
                                    const CoalitionSet& coalitions,
                                    const Background& bg);

// Mean model output over the background.
double BackgroundMean(const Model& model, const Background& bg);

absl::Status CheckRow(const Model& model, std::span<const double> x,
                      const Background& bg);

}  // namespace regime_xai::shap::internal

#endif  // REGIME_XAI_SRC_SHAP_INTERNAL_H_
