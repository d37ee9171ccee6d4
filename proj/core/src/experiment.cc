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

#include "regime_xai/experiment/experiment.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"
#include "regime_xai/utils/parallel.h"
#include "regime_xai/utils/random.h"
#include "regime_xai/utils/status_macros.h"

namespace regime_xai::experiment {
namespace {

double MeanSquaredError(std::span<const double> pred, std::span<const double> y) {
  if (y.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (size_t i = 0; i < y.size(); ++i) sum += (pred[i] - y[i]) * (pred[i] - y[i]);
  return sum / static_cast<double>(y.size());
}

double RSquared(std::span<const double> pred, std::span<const double> y) {
  if (y.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double mean =
      std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double ss_tot = 0.0, ss_res = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    ss_tot += (y[i] - mean) * (y[i] - mean);
    ss_res += (pred[i] - y[i]) * (pred[i] - y[i]);
  }
  if (ss_tot == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return 1.0 - ss_res / ss_tot;
}

// Descending by value, ties to the lower index. Returns 1-based ranks.
std::vector<int> Ranks(const std::vector<double>& values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] > values[b]; });
  std::vector<int> rank(values.size());
  for (size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r) + 1;
  return rank;
}

absl::StatusOr<WindowResult> RunWindow(const timeseries::FeatureMatrix& data,
                                       RowRange range, size_t window_index,
                                       size_t rows_per_day, ModelKind kind,
                                       const ExperimentConfig& config,
                                       uint64_t seed, int explain_threads) {
  WindowResult w;
  w.window_index = window_index;
  w.seed = seed;
  w.rows = range;
  ASSIGN_OR_RETURN(
      w.split,
      SplitBlocks(range, static_cast<size_t>(config.block_days) * rows_per_day,
                  config.test_fraction, DeriveSeed(seed, 0), window_index));

  const timeseries::FeatureMatrix train = data.SelectRows(w.split.train_rows);
  const timeseries::FeatureMatrix test = data.SelectRows(w.split.test_rows);
  const timeseries::FeatureMatrix& explained =
      config.explain_test_rows ? test : train;

  shap::Model model;
  shap::ExplainOptions explain;
  explain.seed = DeriveSeed(seed, 3);
  explain.coalition_budget = config.coalition_budget;
  explain.threads = explain_threads;
  switch (kind) {
    case ModelKind::kGbt: {
      gbt::GbtParams params = config.gbt;
      params.seed = DeriveSeed(seed, 1);
      ASSIGN_OR_RETURN(gbt::TreeEnsemble ensemble, gbt::FitGbt(train, params));
      model = shap::Model::FromTreeEnsemble(ensemble);
      w.model = std::move(ensemble);
      explain.method = shap::Method::kTree;
      break;
    }
    case ModelKind::kMlp: {
      mlp::MlpParams params = config.mlp;
      params.seed = DeriveSeed(seed, 1);
      ASSIGN_OR_RETURN(mlp::MlpFit fit, mlp::FitMlp(train, params));
      model = shap::Model::FromMlp(fit.net);
      w.model = std::move(fit.net);
      w.mlp_report = fit.report;
      explain.method = shap::Method::kKernel;
      break;
    }
  }

  if (config.shap_method.has_value()) explain.method = *config.shap_method;

  const std::vector<double> train_pred = model.Predict(train.x);
  const std::vector<double> test_pred = model.Predict(test.x);
  w.train_mse = MeanSquaredError(train_pred, train.y);
  w.test_mse = MeanSquaredError(test_pred, test.y);
  w.test_r2 = RSquared(test_pred, test.y);

  ASSIGN_OR_RETURN(const shap::Background bg,
                   shap::Background::Subsample(train.x, config.background_size,
                                               DeriveSeed(seed, 2)));
  w.background_rows = bg.size();
  ASSIGN_OR_RETURN(w.explanation,
                   shap::ExplainDataset(model, explained.x, bg, explain));
  ASSIGN_OR_RETURN(w.importance, shap::FeatureImportance(w.explanation));
  w.explained_x = explained.x;
  w.explained_timestamps = explained.timestamps;
  return w;
}

}  // namespace

absl::Status PeriodSpec::Validate() const {
  if (name.empty()) return absl::InvalidArgumentError("Period needs a name");
  if (!(start < end)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Period '", name, "': start must be before end"));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<RowRange>> MakeWindows(size_t n_rows,
                                                  size_t rows_per_day,
                                                  int n_windows,
                                                  double window_fraction) {
  if (n_windows < 1) {
    return absl::InvalidArgumentError("n_windows must be >= 1");
  }
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    return absl::InvalidArgumentError("window_fraction must be in (0, 1]");
  }
  if (rows_per_day < 1) {
    return absl::InvalidArgumentError("rows_per_day must be >= 1");
  }
  const size_t needed = static_cast<size_t>(n_windows) *
                        static_cast<size_t>(kMinDaysPerWindow) * rows_per_day;
  if (n_rows < needed) {
    return absl::FailedPreconditionError(absl::StrCat(
        "Period too short: ", n_rows, " rows, need at least ", needed, " (",
        n_windows, " windows x ", kMinDaysPerWindow, " days)"));
  }
  const size_t length = static_cast<size_t>(
      std::floor(window_fraction * static_cast<double>(n_rows)));
  const size_t span = n_rows - length;
  std::vector<RowRange> windows;
  windows.reserve(static_cast<size_t>(n_windows));
  const size_t steps = static_cast<size_t>(n_windows - 1);
  for (size_t i = 0; i <= steps; ++i) {
    // round(i * span / steps) in integer arithmetic.
    const size_t offset = steps == 0 ? 0 : (2 * i * span + steps) / (2 * steps);
    windows.push_back({offset, offset + length});
  }
  return windows;
}

absl::StatusOr<SplitPlan> SplitBlocks(RowRange window, size_t block_rows,
                                      double test_fraction, uint64_t seed,
                                      size_t window_index) {
  if (block_rows < 1) return absl::InvalidArgumentError("block_rows must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    return absl::InvalidArgumentError("test_fraction must be in (0, 1)");
  }
  SplitPlan plan;
  plan.window_index = window_index;
  plan.block_rows = block_rows;
  plan.seed = seed;
  plan.n_blocks = window.size() / block_rows;
  if (plan.n_blocks < 5) {
    return absl::FailedPreconditionError(absl::StrCat(
        "Window of ", window.size(), " rows holds ", plan.n_blocks,
        " blocks of ", block_rows, " rows; at least 5 are needed"));
  }
  const size_t n_test = static_cast<size_t>(
      std::lround(test_fraction * static_cast<double>(plan.n_blocks)));
  Rng rng(seed);
  plan.test_blocks = rng.SampleWithoutReplacement(plan.n_blocks, n_test);

  std::vector<bool> is_test(plan.n_blocks, false);
  for (size_t b : plan.test_blocks) is_test[b] = true;
  for (size_t r = window.begin; r < window.end; ++r) {
    const size_t block = (r - window.begin) / block_rows;
    if (block < plan.n_blocks && is_test[block]) {
      plan.test_rows.push_back(r);
    } else {
      plan.train_rows.push_back(r);
    }
  }
  return plan;
}

absl::StatusOr<ModelKind> ParseModelKind(absl::string_view name) {
  if (name == "gbt") return ModelKind::kGbt;
  if (name == "mlp") return ModelKind::kMlp;
  return absl::InvalidArgumentError(
      absl::StrCat("Unknown model kind '", name, "' (gbt|mlp)"));
}

absl::string_view ModelKindName(ModelKind kind) {
  return kind == ModelKind::kGbt ? "gbt" : "mlp";
}

absl::Status ExperimentConfig::Validate() const {
  if (n_windows < 1) return absl::InvalidArgumentError("n_windows must be >= 1");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    return absl::InvalidArgumentError("window_fraction must be in (0, 1]");
  }
  if (block_days < 1) return absl::InvalidArgumentError("block_days must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    return absl::InvalidArgumentError("test_fraction must be in (0, 1)");
  }
  if (background_size < 1) {
    return absl::InvalidArgumentError("background_size must be >= 1");
  }
  RETURN_IF_ERROR(gbt.Validate());
  RETURN_IF_ERROR(mlp.Validate());
  return absl::OkStatus();
}

absl::StatusOr<PeriodResult> RunPeriod(const timeseries::FeatureMatrix& data,
                                       const PeriodSpec& period,
                                       ModelKind model_kind,
                                       const ExperimentConfig& config,
                                       uint64_t seed) {
  RETURN_IF_ERROR(period.Validate());
  RETURN_IF_ERROR(config.Validate());
  RETURN_IF_ERROR(data.Validate());
  if (model_kind == ModelKind::kMlp && config.shap_method == shap::Method::kTree) {
    return absl::InvalidArgumentError("The tree engine requires model kind gbt");
  }
  if (data.resolution_hours < 1 || 24 % data.resolution_hours != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Resolution ", data.resolution_hours, "h does not divide a day"));
  }
  const size_t rows_per_day = static_cast<size_t>(24 / data.resolution_hours);
  const timeseries::FeatureMatrix rows = data.SelectTimeRange(period.start, period.end);

  PeriodResult result;
  result.period_name = period.name;
  result.model_kind = model_kind;
  result.feature_names = data.feature_names;
  result.n_rows = rows.size();
  result.dropped_rows = data.dropped_rows;

  auto windows = MakeWindows(rows.size(), rows_per_day, config.n_windows,
                             config.window_fraction);
  if (!windows.ok()) {
    return absl::Status(windows.status().code(),
                        absl::StrCat("Period '", period.name, "': ",
                                     windows.status().message()));
  }

  const int threads = config.threads > 0 ? config.threads : DefaultThreadCount();
  const int outer = std::max(1, std::min(threads, config.n_windows));
  const int inner = std::max(1, threads / outer);
  std::vector<absl::StatusOr<WindowResult>> slots(
      windows->size(), absl::UnknownError("window not run"));
  ParallelFor(windows->size(), outer, [&](size_t w) {
    slots[w] = RunWindow(rows, (*windows)[w], w, rows_per_day, model_kind,
                         config, DeriveSeed(seed, w), inner);
  });

  const size_t n_features = data.num_features();
  for (size_t w = 0; w < slots.size(); ++w) {
    if (!slots[w].ok()) {
      return absl::Status(slots[w].status().code(),
                          absl::StrCat("Period '", period.name, "' window ", w,
                                       ": ", slots[w].status().message()));
    }
    if (slots[w]->importance.degenerate) ++result.degenerate_windows;
    result.windows.push_back(*std::move(slots[w]));
  }

  result.fi_mean.assign(n_features, 0.0);
  result.fi_std.assign(n_features, 0.0);
  const double n_win = static_cast<double>(result.windows.size());
  for (const auto& w : result.windows) {
    for (size_t f = 0; f < n_features; ++f) result.fi_mean[f] += w.importance.fi[f];
  }
  for (double& m : result.fi_mean) m /= n_win;
  for (const auto& w : result.windows) {
    for (size_t f = 0; f < n_features; ++f) {
      const double d = w.importance.fi[f] - result.fi_mean[f];
      result.fi_std[f] += d * d;
    }
  }
  for (double& s : result.fi_std) s = std::sqrt(s / n_win);
  return result;
}

std::vector<std::string> RegimeComparison::RankedBefore() const {
  std::vector<std::string> out(features.size());
  for (const auto& f : features) out[static_cast<size_t>(f.rank_before - 1)] = f.feature;
  return out;
}

std::vector<std::string> RegimeComparison::RankedAfter() const {
  std::vector<std::string> out(features.size());
  for (const auto& f : features) out[static_cast<size_t>(f.rank_after - 1)] = f.feature;
  return out;
}

absl::StatusOr<RegimeComparison> ComparePeriods(const PeriodResult& before,
                                                const PeriodResult& after) {
  if (before.feature_names != after.feature_names) {
    return absl::InvalidArgumentError(
        "ComparePeriods: the periods were fitted on different feature lists");
  }
  if (before.fi_mean.size() != before.feature_names.size() ||
      after.fi_mean.size() != after.feature_names.size()) {
    return absl::InvalidArgumentError("ComparePeriods: incomplete period result");
  }
  RegimeComparison c;
  c.before_name = before.period_name;
  c.after_name = after.period_name;
  const std::vector<int> rank_before = Ranks(before.fi_mean);
  const std::vector<int> rank_after = Ranks(after.fi_mean);
  for (size_t f = 0; f < before.feature_names.size(); ++f) {
    FeatureShift s;
    s.feature = before.feature_names[f];
    s.before_mean = before.fi_mean[f];
    s.before_std = before.fi_std[f];
    s.after_mean = after.fi_mean[f];
    s.after_std = after.fi_std[f];
    s.delta = s.after_mean - s.before_mean;
    s.flagged = std::abs(s.delta) > s.before_std + s.after_std;
    s.rank_before = rank_before[f];
    s.rank_after = rank_after[f];
    c.features.push_back(std::move(s));
  }
  return c;
}

absl::StatusOr<std::vector<DependencePoint>> DependenceData(
    const PeriodResult& result, absl::string_view feature) {
  const auto it = std::find(result.feature_names.begin(),
                            result.feature_names.end(), feature);
  if (it == result.feature_names.end()) {
    return absl::NotFoundError(absl::StrCat("Unknown feature '", feature, "'"));
  }
  const size_t f = static_cast<size_t>(it - result.feature_names.begin());
  std::vector<DependencePoint> points;
  for (const auto& w : result.windows) {
    for (size_t r = 0; r < w.explanation.rows(); ++r) {
      points.push_back({w.window_index, w.explained_timestamps[r],
                        w.explained_x(r, f), w.explanation.phi(r, f)});
    }
  }
  return points;
}

}  // namespace regime_xai::experiment
