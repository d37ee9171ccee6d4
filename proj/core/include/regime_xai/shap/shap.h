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

#ifndef REGIME_XAI_SHAP_SHAP_H_
#define REGIME_XAI_SHAP_SHAP_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>

#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "regime_xai/gbt/gbt.h"
#include "regime_xai/mlp/mlp.h"
#include "regime_xai/timeseries/timestamp.h"
#include "regime_xai/utils/dense_matrix.h"

namespace regime_xai::shap {

// One output per input row.
using PredictFn = std::function<std::vector<double>(const DenseMatrix&)>;

// A model as seen by the explainers: a batch prediction function plus, for
// tree ensembles, the structure TreeSHAP walks.
class Model {
 public:
  static Model FromTreeEnsemble(gbt::TreeEnsemble ensemble);
  static Model FromMlp(mlp::MlpNet net);
  static Model FromFunction(size_t num_features, PredictFn fn,
                            std::vector<std::string> feature_names = {});

  size_t num_features() const { return feature_names_.size(); }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }
  std::vector<double> Predict(const DenseMatrix& x) const { return fn_(x); }
  double PredictRow(std::span<const double> row) const;

  // Null unless built from a tree ensemble.
  const gbt::TreeEnsemble* tree_ensemble() const { return tree_.get(); }

 private:
  PredictFn fn_;
  std::vector<std::string> feature_names_;
  std::shared_ptr<const gbt::TreeEnsemble> tree_;
};

// Reference rows for the interventional value function.
class Background {
 public:
  static absl::StatusOr<Background> Create(DenseMatrix rows);
  // Uniformly subsamples at most max_rows rows without replacement (seeded).
  static absl::StatusOr<Background> Subsample(const DenseMatrix& rows,
                                              size_t max_rows, uint64_t seed);

  const DenseMatrix& rows() const { return rows_; }
  size_t size() const { return rows_.rows(); }
  size_t num_features() const { return rows_.cols(); }

 private:
  DenseMatrix rows_;
};

struct ShapRow {
  std::vector<double> phi;
  // Mean model output over the background, v(empty set).
  double phi0 = 0.0;
  // f(x), v(full set).
  double prediction = 0.0;
};

// v(S) = mean over background rows b of f(z_b), where z_b takes the features
// in S from x and all others from b.
absl::StatusOr<double> ValueFunction(const Model& model,
                                     std::span<const double> x,
                                     const std::vector<bool>& coalition,
                                     const Background& bg);

inline constexpr size_t kMaxExactFeatures = 20;

// Classic Shapley weighting over all 2^n coalitions of the interventional
// value function. n <= kMaxExactFeatures.
absl::StatusOr<ShapRow> ExactShap(const Model& model, std::span<const double> x,
                                  const Background& bg);

// Interventional TreeSHAP: for every (tree, background row) pair, one
// traversal that follows x and the reference together and only branches where
// they disagree on a feature not yet assigned to either side. Equals ExactShap
// for the same background without subset enumeration.
absl::StatusOr<ShapRow> TreeShap(const gbt::TreeEnsemble& model,
                                 std::span<const double> x,
                                 const Background& bg);

// min(2^n - 2, 2n + 2048).
size_t DefaultCoalitionBudget(size_t n_features);

struct KernelShapOptions {
  // 0 selects DefaultCoalitionBudget.
  size_t n_coalitions = 0;
  uint64_t seed = 0;
};

// Weighted least squares over coalitions with the Shapley kernel
//   w(z) = (n - 1) / (C(n, |z|) |z| (n - |z|)),
// with the intercept fixed to v(empty) and the coefficient sum fixed to
// f(x) - v(empty) by eliminating the last coefficient. All 2^n - 2 proper
// non-empty coalitions are enumerated when the budget allows; otherwise
// coalition sizes are drawn from the kernel mass and each draw is paired with
// its complement.
absl::StatusOr<ShapRow> KernelShap(const Model& model, std::span<const double> x,
                                   const Background& bg,
                                   const KernelShapOptions& options = {});

enum class Method { kExact, kTree, kKernel };

absl::StatusOr<Method> ParseMethod(absl::string_view name);
absl::string_view MethodName(Method method);

struct Explanation {
  DenseMatrix phi;  // rows x features, target units
  double phi0 = 0.0;
  std::vector<double> predictions;
  std::vector<std::string> feature_names;

  size_t rows() const { return phi.rows(); }
};

struct ExplainOptions {
  Method method = Method::kTree;
  uint64_t seed = 0;
  // Kernel budget; 0 selects DefaultCoalitionBudget.
  size_t coalition_budget = 0;
  // <= 0: DefaultThreadCount().
  int threads = 0;
};

inline constexpr double kLocalAccuracyTolerance = 1e-6;

// Explains every row of x. Rows may run in parallel; kernel rows use seed
// DeriveSeed(seed, row) so results do not depend on scheduling. A row whose
// phi0 + sum(phi) misses f(x) by more than kLocalAccuracyTolerance is an
// engine bug and fails the whole call.
absl::StatusOr<Explanation> ExplainDataset(const Model& model,
                                           const DenseMatrix& x,
                                           const Background& bg,
                                           const ExplainOptions& options = {});

struct ImportanceVector {
  std::vector<double> fi;
  // All SHAP values were exactly zero; fi is all zeros.
  bool degenerate = false;
};

// FI_k = mean|phi_k| / sum_j mean|phi_j|.
absl::StatusOr<ImportanceVector> FeatureImportance(const Explanation& e);

// `timestamp,prediction,phi0,phi_<feature>...`, one line per explained row.
absl::StatusOr<std::string> ExplanationToCsv(
    const Explanation& e, std::span<const timeseries::Instant> timestamps);

}  // namespace regime_xai::shap

#endif  // REGIME_XAI_SHAP_SHAP_H_
