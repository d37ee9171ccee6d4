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

#include "cli/verify.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "cli/random_models.h"
#include "regime_xai/gbt/gbt.h"
#include "regime_xai/mlp/mlp.h"
#include "regime_xai/shap/shap.h"
#include "regime_xai/utils/random.h"

namespace regime_xai::cli {
namespace {

constexpr double kTreeTolerance = 1e-9;
constexpr double kKernelTolerance = 1e-6;
constexpr double kGradTolerance = 1e-4;
constexpr double kSumTolerance = 1e-9;

CheckResult Fail(std::string name, const absl::Status& status) {
  return {std::move(name), false, std::string(status.message())};
}

CheckResult Measured(std::string name, double worst, double tolerance) {
  return {std::move(name), worst < tolerance,
          absl::StrFormat("max_error=%.3g tolerance=%.0e", worst, tolerance)};
}

double MaxAbsDiff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

CheckResult TreeVsExact(const VerifyOptions& options) {
  const std::string name = "tree_shap_vs_exact";
  Rng rng(DeriveSeed(options.seed, 1));
  double worst = 0.0;
  for (int m = 0; m < 10; ++m) {
    const gbt::TreeEnsemble reference = RandomTreeEnsemble(rng, 6, 3, 5);
    std::string json = gbt::SerializeTreeEnsemble(reference);
    if (options.tree_json_mutator) json = options.tree_json_mutator(std::move(json));
    auto reloaded = gbt::ParseTreeEnsemble(json);
    if (!reloaded.ok()) return Fail(name, reloaded.status());
    auto bg = shap::Background::Create(RandomMatrix(rng, 5, 6));
    if (!bg.ok()) return Fail(name, bg.status());
    const shap::Model oracle = shap::Model::FromTreeEnsemble(reference);
    const DenseMatrix x = RandomMatrix(rng, 10, 6);
    for (size_t r = 0; r < x.rows(); ++r) {
      auto fast = shap::TreeShap(*reloaded, x.Row(r), *bg);
      if (!fast.ok()) return Fail(name, fast.status());
      auto exact = shap::ExactShap(oracle, x.Row(r), *bg);
      if (!exact.ok()) return Fail(name, exact.status());
      worst = std::max(worst, MaxAbsDiff(fast->phi, exact->phi));
      worst = std::max(worst, std::abs(fast->phi0 - exact->phi0));
    }
  }
  return Measured(name, worst, kTreeTolerance);
}

CheckResult KernelExactMode(const VerifyOptions& options) {
  const std::string name = "kernel_shap_exact_mode";
  Rng rng(DeriveSeed(options.seed, 2));
  double worst = 0.0;
  for (int m = 0; m < 3; ++m) {
    const shap::Model model = shap::Model::FromMlp(RandomMlp(rng, {8, 8, 1}));
    auto bg = shap::Background::Create(RandomMatrix(rng, 5, 8));
    if (!bg.ok()) return Fail(name, bg.status());
    const DenseMatrix x = RandomMatrix(rng, 4, 8);
    for (size_t r = 0; r < x.rows(); ++r) {
      shap::KernelShapOptions kopt;
      kopt.n_coalitions = (size_t{1} << 8) - 2;
      auto kernel = shap::KernelShap(model, x.Row(r), *bg, kopt);
      if (!kernel.ok()) return Fail(name, kernel.status());
      auto exact = shap::ExactShap(model, x.Row(r), *bg);
      if (!exact.ok()) return Fail(name, exact.status());
      worst = std::max(worst, MaxAbsDiff(kernel->phi, exact->phi));
    }
  }
  return Measured(name, worst, kKernelTolerance);
}

CheckResult GradientCheck(const VerifyOptions& options) {
  const std::string name = "mlp_gradient_check";
  Rng rng(DeriveSeed(options.seed, 3));
  double worst = 0.0;
  for (int m = 0; m < 5; ++m) {
    const mlp::MlpNet net = RandomMlp(rng, {4, 6, 5, 1});
    const DenseMatrix x = RandomMatrix(rng, 8, 4);
    std::vector<double> y(8);
    for (double& v : y) v = rng.Normal();
    auto err = mlp::GradCheck(net, x, y, 1e-5);
    if (!err.ok()) return Fail(name, err.status());
    worst = std::max(worst, *err);
  }
  return Measured(name, worst, kGradTolerance);
}

// Training data for the fitted-model checks: y depends on columns 0 and 1,
// column 2 is noise, column 3 is constant and therefore a true dummy.
struct Dataset {
  DenseMatrix x;
  std::vector<double> y;
};

Dataset MakeDataset(Rng& rng, size_t rows) {
  Dataset d{RandomMatrix(rng, rows, 4), std::vector<double>(rows)};
  for (size_t r = 0; r < rows; ++r) {
    d.x(r, 3) = 1.0;
    d.y[r] = 2.0 * d.x(r, 0) - d.x(r, 1) + 0.1 * rng.Normal();
  }
  return d;
}

absl::StatusOr<double> LocalAccuracyGap(const shap::Model& model,
                                        const DenseMatrix& x,
                                        const shap::Background& bg,
                                        shap::Method method) {
  shap::ExplainOptions eo;
  eo.method = method;
  eo.threads = 1;
  auto e = shap::ExplainDataset(model, x, bg, eo);
  if (!e.ok()) return e.status();
  const std::vector<double> f = model.Predict(x);
  double worst = 0.0;
  for (size_t r = 0; r < e->rows(); ++r) {
    double total = e->phi0;
    for (size_t j = 0; j < e->phi.cols(); ++j) total += e->phi(r, j);
    worst = std::max(worst, std::abs(total - f[r]));
  }
  return worst;
}

CheckResult LocalAccuracy(const VerifyOptions& options) {
  const std::string name = "local_accuracy";
  Rng rng(DeriveSeed(options.seed, 4));
  const Dataset d = MakeDataset(rng, 200);
  gbt::GbtParams gp;
  gp.n_trees = 50;
  gp.max_depth = 3;
  gp.min_samples_leaf = 5;
  auto ensemble = gbt::FitGbt(d.x, d.y, gp);
  if (!ensemble.ok()) return Fail(name, ensemble.status());
  mlp::MlpParams mp;
  mp.hidden_sizes = {16};
  mp.max_epochs = 20;
  auto net = mlp::FitMlp(d.x, d.y, mp);
  if (!net.ok()) return Fail(name, net.status());
  auto bg = shap::Background::Subsample(d.x, 20, 1);
  if (!bg.ok()) return Fail(name, bg.status());
  const DenseMatrix x = RandomMatrix(rng, 30, 4);

  auto tree_gap = LocalAccuracyGap(shap::Model::FromTreeEnsemble(*ensemble), x, *bg,
                                   shap::Method::kTree);
  if (!tree_gap.ok()) return Fail(name, tree_gap.status());
  auto kernel_gap = LocalAccuracyGap(shap::Model::FromMlp(net->net), x, *bg,
                                     shap::Method::kKernel);
  if (!kernel_gap.ok()) return Fail(name, kernel_gap.status());
  return Measured(name, std::max(*tree_gap, *kernel_gap), shap::kLocalAccuracyTolerance);
}

CheckResult ImportanceNormalization(const VerifyOptions& options) {
  const std::string name = "importance_normalization";
  Rng rng(DeriveSeed(options.seed, 5));
  const Dataset d = MakeDataset(rng, 200);
  gbt::GbtParams gp;
  gp.n_trees = 30;
  gp.min_samples_leaf = 5;
  auto ensemble = gbt::FitGbt(d.x, d.y, gp);
  if (!ensemble.ok()) return Fail(name, ensemble.status());
  auto bg = shap::Background::Subsample(d.x, 20, 2);
  if (!bg.ok()) return Fail(name, bg.status());
  auto e = shap::ExplainDataset(shap::Model::FromTreeEnsemble(*ensemble),
                                RandomMatrix(rng, 40, 4), *bg);
  if (!e.ok()) return Fail(name, e.status());
  auto fi = shap::FeatureImportance(*e);
  if (!fi.ok()) return Fail(name, fi.status());
  const double sum = std::accumulate(fi->fi.begin(), fi->fi.end(), 0.0);
  const double dummy = fi->fi[3];
  return {name, !fi->degenerate && std::abs(sum - 1.0) < kSumTolerance && dummy == 0.0,
          absl::StrFormat("sum_error=%.3g tolerance=%.0e dummy_fi=%g",
                          std::abs(sum - 1.0), kSumTolerance, dummy)};
}

CheckResult GbtLossMonotone(const VerifyOptions& options) {
  const std::string name = "gbt_training_loss_monotone";
  Rng rng(DeriveSeed(options.seed, 6));
  const Dataset d = MakeDataset(rng, 150);
  gbt::GbtParams gp;
  gp.n_trees = 40;
  gp.min_samples_leaf = 3;
  auto ensemble = gbt::FitGbt(d.x, d.y, gp);
  if (!ensemble.ok()) return Fail(name, ensemble.status());
  double previous = INFINITY;
  double worst_increase = 0.0;
  for (size_t m = 0; m <= ensemble->trees().size(); ++m) {
    const std::vector<double> pred = ensemble->Prefix(m).PredictBatch(d.x);
    double mse = 0.0;
    for (size_t r = 0; r < pred.size(); ++r) mse += (pred[r] - d.y[r]) * (pred[r] - d.y[r]);
    mse /= static_cast<double>(pred.size());
    worst_increase = std::max(worst_increase, mse - previous);
    previous = mse;
  }
  return {name, worst_increase <= 0.0,
          absl::StrFormat("stages=%d worst_increase=%g", ensemble->trees().size(),
                          worst_increase)};
}

}  // namespace

std::vector<CheckResult> RunVerifySuite(const VerifyOptions& options) {
  return {TreeVsExact(options),     KernelExactMode(options),
          GradientCheck(options),   LocalAccuracy(options),
          ImportanceNormalization(options), GbtLossMonotone(options)};
}

}  // namespace regime_xai::cli
