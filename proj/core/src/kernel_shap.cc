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

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "absl/strings/str_cat.h"
#include "regime_xai/shap/shap.h"
#include "regime_xai/utils/random.h"
#include "regime_xai/utils/status_macros.h"
#include "shap_internal.h"

namespace regime_xai::shap {
namespace {

double Binomial(size_t n, size_t k) {
  double c = 1.0;
  for (size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return c;
}

double KernelWeight(size_t n, size_t size) {
  return static_cast<double>(n - 1) /
         (Binomial(n, size) * static_cast<double>(size) *
          static_cast<double>(n - size));
}

}  // namespace

size_t DefaultCoalitionBudget(size_t n_features) {
  const size_t linear = 2 * n_features + 2048;
  if (n_features >= 63) return linear;
  const size_t all = (size_t{1} << n_features) - 2;
  return std::min(all, linear);
}

absl::StatusOr<ShapRow> KernelShap(const Model& model, std::span<const double> x,
                                   const Background& bg,
                                   const KernelShapOptions& options) {
  RETURN_IF_ERROR(internal::CheckRow(model, x, bg));
  const size_t n = x.size();
  if (n < 2) {
    return absl::InvalidArgumentError("KernelShap needs at least 2 features");
  }
  const size_t budget =
      options.n_coalitions > 0 ? options.n_coalitions : DefaultCoalitionBudget(n);

  ShapRow out;
  out.phi0 = internal::BackgroundMean(model, bg);
  out.prediction = model.PredictRow(x);
  const double delta = out.prediction - out.phi0;

  internal::CoalitionSet coalitions{n, {}};
  std::vector<double> weights;
  const bool exact = n < 63 && (size_t{1} << n) - 2 <= budget;
  if (exact) {
    const size_t n_subsets = size_t{1} << n;
    std::vector<uint8_t> mask(n);
    for (size_t s = 1; s + 1 < n_subsets; ++s) {
      for (size_t j = 0; j < n; ++j) mask[j] = (s >> j) & 1U;
      coalitions.Add(mask);
      weights.push_back(KernelWeight(n, static_cast<size_t>(std::popcount(s))));
    }
  } else {
    // Size s carries total kernel mass C(n,s) w(s) = (n-1) / (s (n-s)).
    std::vector<double> cumulative(n - 1);
    double total = 0.0;
    for (size_t s = 1; s < n; ++s) {
      total += static_cast<double>(n - 1) /
               (static_cast<double>(s) * static_cast<double>(n - s));
      cumulative[s - 1] = total;
    }
    Rng rng(options.seed);
    std::map<std::vector<uint8_t>, double> counts;
    const size_t pairs = std::max<size_t>(1, budget / 2);
    for (size_t p = 0; p < pairs; ++p) {
      const double u = rng.Uniform01() * total;
      const size_t size = static_cast<size_t>(
          std::upper_bound(cumulative.begin(), cumulative.end(), u) -
          cumulative.begin()) + 1;
      std::vector<uint8_t> mask(n, 0);
      for (size_t j : rng.SampleWithoutReplacement(n, std::min(size, n - 1))) {
        mask[j] = 1;
      }
      counts[mask] += 1.0;
      for (auto& m : mask) m = 1 - m;
      counts[mask] += 1.0;
    }
    for (const auto& [mask, count] : counts) {
      coalitions.Add(mask);
      weights.push_back(count);
    }
  }

  const std::vector<double> v =
      internal::CoalitionValues(model, x, coalitions, bg);

  // Eliminate the last coefficient: phi_last = delta - sum(others).
  const Eigen::Index m = static_cast<Eigen::Index>(coalitions.size());
  const Eigen::Index k = static_cast<Eigen::Index>(n - 1);
  Eigen::MatrixXd a(m, k);
  Eigen::VectorXd target(m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const auto mask = coalitions.Get(static_cast<size_t>(c));
    const double last = mask[n - 1] ? 1.0 : 0.0;
    const double sw = std::sqrt(weights[static_cast<size_t>(c)]);
    for (Eigen::Index j = 0; j < k; ++j) {
      a(c, j) = sw * ((mask[static_cast<size_t>(j)] ? 1.0 : 0.0) - last);
    }
    target[c] = sw * (v[static_cast<size_t>(c)] - out.phi0 - last * delta);
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < k) {
    return absl::FailedPreconditionError(absl::StrCat(
        "KernelShap regression is singular (rank ", qr.rank(), " < ", k,
        ") with ", m, " distinct coalitions; raise the coalition budget"));
  }
  const Eigen::VectorXd solution = qr.solve(target);

  out.phi.assign(n, 0.0);
  double rest = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    out.phi[static_cast<size_t>(j)] = solution[j];
    rest += solution[j];
  }
  out.phi[n - 1] = delta - rest;
  return out;
}

}  // namespace regime_xai::shap
