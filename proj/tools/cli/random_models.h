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

#ifndef REGIME_XAI_TOOLS_CLI_RANDOM_MODELS_H_
#define REGIME_XAI_TOOLS_CLI_RANDOM_MODELS_H_

#include <cstddef>
#include <vector>

#include "regime_xai/gbt/gbt.h"
#include "regime_xai/mlp/mlp.h"
#include "regime_xai/utils/dense_matrix.h"
#include "regime_xai/utils/random.h"

namespace regime_xai::cli {

// Standard normal entries.
DenseMatrix RandomMatrix(Rng& rng, size_t rows, size_t cols);

// Trees of depth <= max_depth with random split features, thresholds drawn
// from N(0, 1) and leaf values from U(-1, 1). Features may repeat along a path.
gbt::TreeEnsemble RandomTreeEnsemble(Rng& rng, size_t num_features,
                                     int max_depth, int n_trees);

// He-initialized ReLU net with non-zero random biases, so that kinks fall
// inside the data range.
mlp::MlpNet RandomMlp(Rng& rng, std::vector<int> layer_sizes);

}  // namespace regime_xai::cli

#endif  // REGIME_XAI_TOOLS_CLI_RANDOM_MODELS_H_
