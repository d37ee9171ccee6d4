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

#ifndef REGIME_XAI_EXPERIMENT_EXPERIMENT_H_
#define REGIME_XAI_EXPERIMENT_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "regime_xai/gbt/gbt.h"
#include "regime_xai/mlp/mlp.h"
#include "regime_xai/shap/shap.h"
#include "regime_xai/timeseries/feature_matrix.h"

namespace regime_xai::experiment {

using timeseries::Instant;

// One regulatory regime, [start, end).
struct PeriodSpec {
  std::string name;
  Instant start;
  Instant end;
  // Free-text description of the regime in force.
  std::string regime;

  absl::Status Validate() const;
};

struct RowRange {
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end - begin; }
  friend bool operator==(const RowRange&, const RowRange&) = default;
};

inline constexpr int kDefaultWindows = 6;
inline constexpr double kDefaultWindowFraction = 0.5;
inline constexpr int kDefaultBlockDays = 4;
inline constexpr double kDefaultTestFraction = 0.2;
// Each window must hold at least this many days of rows.
inline constexpr int kMinDaysPerWindow = 4;

// n_windows windows of floor(window_fraction * n_rows) rows whose offsets are
// evenly spaced (rounded) so the first starts at row 0 and the last ends at
// row n_rows. Requires n_rows >= n_windows * kMinDaysPerWindow * rows_per_day.
absl::StatusOr<std::vector<RowRange>> MakeWindows(
    size_t n_rows, size_t rows_per_day, int n_windows = kDefaultWindows,
    double window_fraction = kDefaultWindowFraction);

struct SplitPlan {
  size_t window_index = 0;
  // Absolute row indices, ascending.
  std::vector<size_t> train_rows;
  std::vector<size_t> test_rows;
  // Indices (within the window) of the blocks held out for testing.
  std::vector<size_t> test_blocks;
  size_t n_blocks = 0;
  size_t block_rows = 0;
  uint64_t seed = 0;
};

// Cuts the window into consecutive blocks of block_rows rows; a trailing
// partial block goes to training. round(test_fraction * n_blocks) whole blocks
// are drawn uniformly without replacement as the test set. Requires >= 5
// blocks.
absl::StatusOr<SplitPlan> SplitBlocks(RowRange window, size_t block_rows,
                                      double test_fraction, uint64_t seed,
                                      size_t window_index = 0);

enum class ModelKind { kGbt, kMlp };

absl::StatusOr<ModelKind> ParseModelKind(absl::string_view name);
absl::string_view ModelKindName(ModelKind kind);

struct ExperimentConfig {
  int n_windows = kDefaultWindows;
  double window_fraction = kDefaultWindowFraction;
  int block_days = kDefaultBlockDays;
  double test_fraction = kDefaultTestFraction;
  // Explain held-out rows (default) or the training rows of each window.
  bool explain_test_rows = true;
  size_t background_size = 100;
  // Kernel engine budget; 0 selects shap::DefaultCoalitionBudget.
  size_t coalition_budget = 0;
  // Unset: tree engine for gbt, kernel engine for mlp.
  std::optional<shap::Method> shap_method;
  gbt::GbtParams gbt;
  mlp::MlpParams mlp;
  // <= 0: DefaultThreadCount().
  int threads = 0;

  absl::Status Validate() const;
};

struct WindowResult {
  size_t window_index = 0;
  uint64_t seed = 0;
  RowRange rows;
  SplitPlan split;
  std::variant<gbt::TreeEnsemble, mlp::MlpNet> model;
  // Set for mlp windows.
  std::optional<mlp::MlpTrainingReport> mlp_report;
  // Rows the explanation covers (test rows unless configured otherwise).
  std::vector<Instant> explained_timestamps;
  DenseMatrix explained_x;
  shap::Explanation explanation;
  shap::ImportanceVector importance;
  double train_mse = 0.0;
  double test_mse = 0.0;
  // NaN when the test targets are constant.
  double test_r2 = 0.0;
  size_t background_rows = 0;
};

struct PeriodResult {
  std::string period_name;
  ModelKind model_kind = ModelKind::kGbt;
  std::vector<std::string> feature_names;
  std::vector<WindowResult> windows;
  // Across windows; std is the population standard deviation.
  std::vector<double> fi_mean;
  std::vector<double> fi_std;
  size_t n_rows = 0;
  size_t dropped_rows = 0;
  size_t degenerate_windows = 0;
};

// Fits and explains one model per sliding window of the period's rows. The
// tree engine explains GBT models and the kernel engine explains MLPs. Window
// w uses seed DeriveSeed(seed, w), so results do not depend on scheduling.
absl::StatusOr<PeriodResult> RunPeriod(const timeseries::FeatureMatrix& data,
                                       const PeriodSpec& period,
                                       ModelKind model_kind,
                                       const ExperimentConfig& config,
                                       uint64_t seed);

struct FeatureShift {
  std::string feature;
  double before_mean = 0.0;
  double before_std = 0.0;
  double after_mean = 0.0;
  double after_std = 0.0;
  double delta = 0.0;  // after_mean - before_mean
  // |delta| > before_std + after_std
  bool flagged = false;
  // 1 = most important; ties go to the lower feature index.
  int rank_before = 0;
  int rank_after = 0;
};

struct RegimeComparison {
  std::string before_name;
  std::string after_name;
  std::vector<FeatureShift> features;

  // Feature names ordered by rank in the respective period.
  std::vector<std::string> RankedBefore() const;
  std::vector<std::string> RankedAfter() const;
};

absl::StatusOr<RegimeComparison> ComparePeriods(const PeriodResult& before,
                                                const PeriodResult& after);

struct DependencePoint {
  size_t window = 0;
  Instant timestamp;
  double x_value = 0.0;
  double phi_value = 0.0;
};

// (feature value, SHAP value) pairs of every window's explained rows, in
// window then row order. No binning or smoothing.
absl::StatusOr<std::vector<DependencePoint>> DependenceData(
    const PeriodResult& result, absl::string_view feature);

// `period,window,feature,fi`
std::string ImportanceCsv(std::span<const PeriodResult> results);
// `feature,before_mean,before_std,after_mean,after_std,delta,flagged`
std::string ComparisonCsv(const RegimeComparison& comparison);
// `period,window,timestamp,feature,x_value,phi_value` for every feature.
std::string DependenceCsv(std::span<const PeriodResult> results);

}  // namespace regime_xai::experiment

#endif  // REGIME_XAI_EXPERIMENT_EXPERIMENT_H_
