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

#include "regime_xai/timeseries/synthetic.h"

#include <array>

#include "absl/strings/str_cat.h"
#include "regime_xai/utils/random.h"

namespace regime_xai::timeseries {
namespace {

FeatureMatrix MakePeriod(size_t n, const std::array<double, 2>& coef,
                         double noise_sigma, int resolution_hours,
                         Instant start, Rng& rng) {
  FeatureMatrix m;
  m.feature_names = {"x1", "x2", "x3"};
  m.target_name = "y";
  m.resolution_hours = resolution_hours;
  m.x = DenseMatrix(n, 3);
  m.y.resize(n);
  m.timestamps.resize(n);
  for (size_t r = 0; r < n; ++r) {
    const double x1 = rng.Normal();
    const double x2 = rng.Normal();
    const double x3 = rng.Normal();
    const double noise = noise_sigma * rng.Normal();
    m.x(r, 0) = x1;
    m.x(r, 1) = x2;
    m.x(r, 2) = x3;
    m.y[r] = coef[0] * x1 + coef[1] * x2 + noise;
    m.timestamps[r] = AddHours(start, static_cast<long>(r) * resolution_hours);
  }
  return m;
}

}  // namespace

absl::StatusOr<std::pair<FeatureMatrix, FeatureMatrix>> SynthRegime(
    size_t n_rows_per_period, uint64_t seed,
    const SynthRegimeOptions& options) {
  if (n_rows_per_period < kMinSynthRowsPerPeriod) {
    return absl::InvalidArgumentError(
        absl::StrCat("SynthRegime needs >= ", kMinSynthRowsPerPeriod,
                     " rows per period, got ", n_rows_per_period));
  }
  if (options.resolution_hours < 1 || !(options.noise_sigma >= 0.0)) {
    return absl::InvalidArgumentError("Invalid SynthRegime options");
  }
  Rng rng(seed);
  FeatureMatrix a = MakePeriod(n_rows_per_period, {3.0, 1.0},
                               options.noise_sigma, options.resolution_hours,
                               options.start, rng);
  const Instant b_start =
      AddHours(options.start, static_cast<long>(n_rows_per_period) *
                                  options.resolution_hours);
  FeatureMatrix b = MakePeriod(n_rows_per_period, {1.0, 3.0},
                               options.noise_sigma, options.resolution_hours,
                               b_start, rng);
  return std::make_pair(std::move(a), std::move(b));
}

TimeTable SynthRegimeTable(const FeatureMatrix& period_a,
                           const FeatureMatrix& period_b) {
  std::vector<Instant> timestamps = period_a.timestamps;
  timestamps.insert(timestamps.end(), period_b.timestamps.begin(),
                    period_b.timestamps.end());
  std::vector<Column> columns;
  for (size_t f = 0; f < period_a.num_features(); ++f) {
    Column c{period_a.feature_names[f], period_a.x.Column(f)};
    const auto tail = period_b.x.Column(f);
    c.values.insert(c.values.end(), tail.begin(), tail.end());
    columns.push_back(std::move(c));
  }
  Column y{period_a.target_name, period_a.y};
  y.values.insert(y.values.end(), period_b.y.begin(), period_b.y.end());
  columns.push_back(std::move(y));
  // Both inputs come from SynthRegime, so the grid is uniform by construction.
  return *TimeTable::Create(std::move(timestamps), period_a.resolution_hours,
                            std::move(columns));
}

}  // namespace regime_xai::timeseries
