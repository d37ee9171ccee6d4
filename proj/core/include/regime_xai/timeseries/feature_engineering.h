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

#ifndef REGIME_XAI_TIMESERIES_FEATURE_ENGINEERING_H_
#define REGIME_XAI_TIMESERIES_FEATURE_ENGINEERING_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "regime_xai/timeseries/feature_matrix.h"
#include "regime_xai/timeseries/time_table.h"

namespace regime_xai::timeseries {

// Block means over consecutive groups of block_hours / resolution rows,
// starting at the first timestamp. Missing values are skipped; an all-missing
// block yields a missing value. A trailing partial block is dropped. Output
// timestamps are block starts.
absl::StatusOr<TimeTable> ResampleMean(const TimeTable& table, int block_hours);

// Trailing mean over the current sample and the window_samples - 1 before it.
// The first windows are partial (mean over the available prefix). Missing
// samples are skipped; a window with no observations is missing.
absl::StatusOr<std::vector<double>> MovingAverage(std::span<const double> series,
                                                  int window_samples);
// Same with the window given in days at the series' resolution.
absl::StatusOr<std::vector<double>> MovingAverageDays(
    std::span<const double> series, int window_days, int resolution_hours);

struct ResidualLoadInputs {
  std::span<const double> load_forecast;
  std::span<const double> wind_forecast;
  std::span<const double> solar_forecast;
  std::span<const double> ror_actual;
};

inline constexpr int kDefaultRorLagDays = 7;

// load - wind - solar - mean(run-of-river over the ror_lag_days preceding the
// current instant, current instant excluded). The run-of-river term only
// looks back, so the result is available at forecast time. Rows without a
// full lag window of history are missing.
absl::StatusOr<std::vector<double>> ResidualLoad(const ResidualLoadInputs& in,
                                                 int ror_lag_days = kDefaultRorLagDays,
                                                 int resolution_hours = 1);

// Factor weighting the energy price in the mixed bid-selection price.
inline constexpr double kMixedPriceAlphaWarnAbove = 0.1;

struct PriceInputs {
  std::span<const double> capacity_price;  // EUR/MW
  std::span<const double> energy_price;    // EUR/MWh
  double alpha = 0.0;
};

struct MixedPriceResult {
  std::vector<double> values;
  std::vector<std::string> warnings;
};

// capacity + alpha * energy, elementwise. Missing inputs propagate. Warns when
// alpha leaves the single-digit percentage range.
absl::StatusOr<MixedPriceResult> MixedPrice(const PriceInputs& p);

// Inner join on timestamps across tables of equal resolution. Each named
// column must exist in exactly one table. Rows with any missing cell are
// dropped and counted in FeatureMatrix::dropped_rows.
absl::StatusOr<FeatureMatrix> AlignJoin(std::span<const TimeTable> tables,
                                        const std::vector<std::string>& feature_cols,
                                        const std::string& target_col);

// Places all columns of all tables on one uniform grid covering the common
// time span. Grid points a table does not provide become missing cells, so the
// result keeps every TimeTable invariant. Fails if the spans do not overlap.
absl::StatusOr<TimeTable> MergeOnGrid(std::span<const TimeTable> tables);

}  // namespace regime_xai::timeseries

#endif  // REGIME_XAI_TIMESERIES_FEATURE_ENGINEERING_H_
