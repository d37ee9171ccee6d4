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
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "regime_xai/shap/shap.h"
#include "regime_xai/utils/number_format.h"
#include "regime_xai/utils/parallel.h"
#include "regime_xai/utils/random.h"
#include "regime_xai/utils/status_macros.h"
#include "shap_internal.h"

namespace regime_xai::shap {
namespace internal {

// Rows per prediction call when evaluating many coalitions.
constexpr size_t kPredictChunkRows = 1 << 15;

std::vector<double> CoalitionValues(const Model& model,
                                    std::span<const double> x,
                                    const CoalitionSet& coalitions,
                                    const Background& bg) {
  const size_t n = model.num_features();
  const size_t b_rows = bg.size();
  const size_t per_chunk = std::max<size_t>(1, kPredictChunkRows / b_rows);
  std::vector<double> values(coalitions.size(), 0.0);
  for (size_t start = 0; start < coalitions.size(); start += per_chunk) {
    const size_t end = std::min(coalitions.size(), start + per_chunk);
    DenseMatrix hybrid((end - start) * b_rows, n);
    for (size_t c = start; c < end; ++c) {
      const auto mask = coalitions.Get(c);
      for (size_t b = 0; b < b_rows; ++b) {
        auto row = hybrid.Row((c - start) * b_rows + b);
        const auto ref = bg.rows().Row(b);
        for (size_t j = 0; j < n; ++j) row[j] = mask[j] ? x[j] : ref[j];
      }
    }
    const std::vector<double> pred = model.Predict(hybrid);
    for (size_t c = start; c < end; ++c) {
      double sum = 0.0;
      for (size_t b = 0; b < b_rows; ++b) sum += pred[(c - start) * b_rows + b];
      values[c] = sum / static_cast<double>(b_rows);
    }
  }
  return values;
}

double BackgroundMean(const Model& model, const Background& bg) {
  const std::vector<double> pred = model.Predict(bg.rows());
  double sum = 0.0;
  for (double p : pred) sum += p;
  return sum / static_cast<double>(pred.size());
}

absl::Status CheckRow(const Model& model, std::span<const double> x,
                      const Background& bg) {
  if (x.size() != model.num_features() ||
      bg.num_features() != model.num_features()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Shape mismatch: model has ", model.num_features(), " features, row ",
        x.size(), ", background ", bg.num_features()));
  }
  return absl::OkStatus();
}

}  // namespace internal

Model Model::FromTreeEnsemble(gbt::TreeEnsemble ensemble) {
  Model m;
  auto tree = std::make_shared<const gbt::TreeEnsemble>(std::move(ensemble));
  m.feature_names_ = tree->feature_names();
  m.fn_ = [tree](const DenseMatrix& x) { return tree->PredictBatch(x); };
  m.tree_ = std::move(tree);
  return m;
}

Model Model::FromMlp(mlp::MlpNet net) {
  Model m;
  auto shared = std::make_shared<const mlp::MlpNet>(std::move(net));
  m.feature_names_ = shared->feature_names;
  m.fn_ = [shared](const DenseMatrix& x) { return shared->PredictBatch(x); };
  return m;
}

Model Model::FromFunction(size_t num_features, PredictFn fn,
                          std::vector<std::string> feature_names) {
  Model m;
  if (feature_names.size() != num_features) {
    feature_names.clear();
    for (size_t f = 0; f < num_features; ++f) {
      feature_names.push_back(absl::StrCat("f", f));
    }
  }
  m.feature_names_ = std::move(feature_names);
  m.fn_ = std::move(fn);
  return m;
}

double Model::PredictRow(std::span<const double> row) const {
  DenseMatrix x(0, row.size());
  x.AppendRow(row);
  return fn_(x).front();
}

absl::StatusOr<Background> Background::Create(DenseMatrix rows) {
  if (rows.rows() == 0) {
    return absl::InvalidArgumentError("Background needs at least one row");
  }
  const auto& v = rows.values();
  if (std::any_of(v.begin(), v.end(), [](double d) { return !std::isfinite(d); })) {
    return absl::InvalidArgumentError("Background contains missing cells");
  }
  Background bg;
  bg.rows_ = std::move(rows);
  return bg;
}

absl::StatusOr<Background> Background::Subsample(const DenseMatrix& rows,
                                                  size_t max_rows,
                                                  uint64_t seed) {
  if (max_rows == 0) {
    return absl::InvalidArgumentError("Background size must be >= 1");
  }
  if (rows.rows() <= max_rows) return Create(rows);
  Rng rng(seed);
  const std::vector<size_t> picked =
      rng.SampleWithoutReplacement(rows.rows(), max_rows);
  return Create(rows.SelectRows(picked));
}

absl::StatusOr<double> ValueFunction(const Model& model,
                                     std::span<const double> x,
                                     const std::vector<bool>& coalition,
                                     const Background& bg) {
  RETURN_IF_ERROR(internal::CheckRow(model, x, bg));
  if (coalition.size() != x.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("Coalition mask has ", coalition.size(),
                     " entries for ", x.size(), " features"));
  }
  internal::CoalitionSet set{x.size(), {}};
  for (bool in : coalition) set.masks.push_back(in ? 1 : 0);
  return internal::CoalitionValues(model, x, set, bg).front();
}

absl::StatusOr<ShapRow> ExactShap(const Model& model, std::span<const double> x,
                                  const Background& bg) {
  RETURN_IF_ERROR(internal::CheckRow(model, x, bg));
  const size_t n = x.size();
  if (n > kMaxExactFeatures) {
    return absl::InvalidArgumentError(
        absl::StrCat("ExactShap enumerates 2^n coalitions; n=", n,
                     " exceeds the limit of ", kMaxExactFeatures));
  }
  const size_t n_subsets = size_t{1} << n;
  internal::CoalitionSet all{n, {}};
  all.masks.resize(n_subsets * n);
  for (size_t s = 0; s < n_subsets; ++s) {
    for (size_t j = 0; j < n; ++j) all.masks[s * n + j] = (s >> j) & 1U;
  }
  const std::vector<double> v = internal::CoalitionValues(model, x, all, bg);

  // |S|! (n - |S| - 1)! / n! = 1 / (n * C(n-1, |S|))
  std::vector<double> weight(n, 0.0);
  for (size_t s = 0; s < n; ++s) {
    double binom = 1.0;
    for (size_t k = 1; k <= s; ++k) {
      binom = binom * static_cast<double>(n - 1 - s + k) / static_cast<double>(k);
    }
    weight[s] = 1.0 / (static_cast<double>(n) * binom);
  }

  ShapRow out;
  out.phi.assign(n, 0.0);
  out.phi0 = v[0];
  out.prediction = v[n_subsets - 1];
  for (size_t j = 0; j < n; ++j) {
    const size_t bit = size_t{1} << j;
    double sum = 0.0;
    for (size_t s = 0; s < n_subsets; ++s) {
      if (s & bit) continue;
      sum += weight[static_cast<size_t>(std::popcount(s))] * (v[s | bit] - v[s]);
    }
    out.phi[j] = sum;
  }
  return out;
}

absl::StatusOr<Method> ParseMethod(absl::string_view name) {
  if (name == "exact") return Method::kExact;
  if (name == "tree") return Method::kTree;
  if (name == "kernel") return Method::kKernel;
  return absl::InvalidArgumentError(
      absl::StrCat("Unknown SHAP method '", name, "' (exact|tree|kernel)"));
}

absl::string_view MethodName(Method method) {
  switch (method) {
    case Method::kExact:
      return "exact";
    case Method::kTree:
      return "tree";
    case Method::kKernel:
      return "kernel";
  }
  return "unknown";
}

absl::StatusOr<Explanation> ExplainDataset(const Model& model,
                                           const DenseMatrix& x,
                                           const Background& bg,
                                           const ExplainOptions& options) {
  const size_t n = model.num_features();
  if (x.cols() != n || bg.num_features() != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "ExplainDataset: model has ", n, " features, input ", x.cols(),
        ", background ", bg.num_features()));
  }
  if (options.method == Method::kTree && model.tree_ensemble() == nullptr) {
    return absl::InvalidArgumentError(
        "The tree engine requires a tree-ensemble model");
  }

  Explanation e;
  e.feature_names = model.feature_names();
  e.phi = DenseMatrix(x.rows(), n);
  e.predictions.assign(x.rows(), 0.0);
  e.phi0 = internal::BackgroundMean(model, bg);

  std::vector<absl::Status> statuses(x.rows());
  ParallelFor(x.rows(), options.threads, [&](size_t r) {
    absl::StatusOr<ShapRow> row;
    switch (options.method) {
      case Method::kExact:
        row = ExactShap(model, x.Row(r), bg);
        break;
      case Method::kTree:
        row = TreeShap(*model.tree_ensemble(), x.Row(r), bg);
        break;
      case Method::kKernel:
        row = KernelShap(model, x.Row(r), bg,
                         {options.coalition_budget, DeriveSeed(options.seed, r)});
        break;
    }
    if (!row.ok()) {
      statuses[r] = row.status();
      return;
    }
    std::copy(row->phi.begin(), row->phi.end(), e.phi.Row(r).begin());
    e.predictions[r] = row->prediction;
  });
  for (size_t r = 0; r < x.rows(); ++r) {
    if (!statuses[r].ok()) {
      return absl::Status(statuses[r].code(),
                          absl::StrCat("row ", r, ": ", statuses[r].message()));
    }
  }

  // Local accuracy against an independent forward pass.
  const std::vector<double> f = model.Predict(x);
  for (size_t r = 0; r < x.rows(); ++r) {
    double total = e.phi0;
    for (double p : e.phi.Row(r)) total += p;
    const double gap = std::abs(total - f[r]);
    if (!(gap <= kLocalAccuracyTolerance)) {
      return absl::InternalError(absl::StrCat(
          "Local accuracy violated by the ", MethodName(options.method),
          " engine at row ", r, ": phi0 + sum(phi) = ", total, ", f(x) = ",
          f[r], " (gap ", gap, ")"));
    }
    e.predictions[r] = f[r];
  }
  return e;
}

absl::StatusOr<ImportanceVector> FeatureImportance(const Explanation& e) {
  if (e.rows() == 0) {
    return absl::InvalidArgumentError(
        "Feature importance needs at least one explained row");
  }
  const size_t n = e.phi.cols();
  std::vector<double> mean_abs(n, 0.0);
  for (size_t r = 0; r < e.rows(); ++r) {
    for (size_t j = 0; j < n; ++j) mean_abs[j] += std::abs(e.phi(r, j));
  }
  double total = 0.0;
  for (double& m : mean_abs) {
    m /= static_cast<double>(e.rows());
    total += m;
  }
  ImportanceVector out;
  if (total == 0.0) {
    out.fi.assign(n, 0.0);
    out.degenerate = true;
    return out;
  }
  out.fi.resize(n);
  for (size_t j = 0; j < n; ++j) out.fi[j] = mean_abs[j] / total;
  return out;
}

absl::StatusOr<std::string> ExplanationToCsv(
    const Explanation& e, std::span<const timeseries::Instant> timestamps) {
  if (timestamps.size() != e.rows()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "ExplanationToCsv: ", timestamps.size(), " timestamps for ", e.rows(),
        " rows"));
  }
  std::string out = "timestamp,prediction,phi0";
  for (const auto& f : e.feature_names) absl::StrAppend(&out, ",phi_", f);
  out += "\n";
  for (size_t r = 0; r < e.rows(); ++r) {
    absl::StrAppend(&out, timeseries::FormatTimestamp(timestamps[r]), ",",
                    FormatDouble(e.predictions[r]), ",", FormatDouble(e.phi0));
    for (double p : e.phi.Row(r)) absl::StrAppend(&out, ",", FormatDouble(p));
    out += "\n";
  }
  return out;
}

}  // namespace regime_xai::shap
