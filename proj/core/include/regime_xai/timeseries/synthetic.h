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

#ifndef REGIME_XAI_TIMESERIES_SYNTHETIC_H_
#define REGIME_XAI_TIMESERIES_SYNTHETIC_H_

#include <cstdint>
#include <utility>

#include "absl/status/statusor.h"
#include "regime_xai/timeseries/feature_matrix.h"
#include "regime_xai/timeseries/time_table.h"

namespace regime_xai::timeseries {

struct SynthRegimeOptions {
  double noise_sigma = 0.5;
  int resolution_hours = 4;
  // First timestamp of period A; period B follows without a gap.
  Instant start = std::chrono::sys_days(std::chrono::year(2018) /
                                        std::chrono::January / 1);
};

inline constexpr size_t kMinSynthRowsPerPeriod = 500;

// Two periods with known ground truth over independent standard-normal
// features x1, x2, x3:
//   period A: y = 3*x1 + 1*x2 + noise
//   period B: y = 1*x1 + 3*x2 + noise
// x3 never enters the target. Deterministic for a fixed seed.
absl::StatusOr<std::pair<FeatureMatrix, FeatureMatrix>> SynthRegime(
    size_t n_rows_per_period, uint64_t seed,
    const SynthRegimeOptions& options = {});

// Both periods as one CSV-ready table: timestamp, x1, x2, x3, y.
TimeTable SynthRegimeTable(const FeatureMatrix& period_a,
                           const FeatureMatrix& period_b);

}  // namespace regime_xai::timeseries

#endif  // REGIME_XAI_TIMESERIES_SYNTHETIC_H_
