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

#include "cli/pipeline.h"

#include <algorithm>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "regime_xai/timeseries/feature_engineering.h"
#include "regime_xai/timeseries/time_table.h"
#include "regime_xai/utils/status_macros.h"

namespace regime_xai::cli {
namespace {

using timeseries::TimeTable;

// Column lookups in the pipeline fail as config errors that name the field.
absl::StatusOr<std::span<const double>> Column(const TimeTable& t,
                                               const std::string& name,
                                               const std::string& field) {
  if (!t.HasColumn(name)) {
    return absl::InvalidArgumentError(
        absl::StrCat("config: ", field, ": column '", name, "' not found in inputs"));
  }
  return t.column(name);
}

absl::StatusOr<PeriodData> CutPeriod(const TimeTable& grid,
                                     const timeseries::FeatureMatrix& all,
                                     const experiment::PeriodSpec& spec) {
  PeriodData p;
  p.spec = spec;
  p.matrix = all.SelectTimeRange(spec.start, spec.end);
  const auto& ts = grid.timestamps();
  p.grid_rows = static_cast<size_t>(
      std::lower_bound(ts.begin(), ts.end(), spec.end) -
      std::lower_bound(ts.begin(), ts.end(), spec.start));
  p.matrix.dropped_rows = p.grid_rows - p.matrix.size();
  if (p.matrix.size() == 0) {
    return absl::FailedPreconditionError(absl::StrCat(
        "Period '", spec.name, "' has no complete rows in the input data"));
  }
  return p;
}

}  // namespace

absl::StatusOr<FeatureBuild> BuildFeatures(const RunConfig& config) {
  const DataConfig& d = config.data;
  int resolution = d.resample_hours;
  if (resolution == 0) {
    resolution = d.inputs.front().resolution_hours;
    for (size_t i = 1; i < d.inputs.size(); ++i) {
      if (d.inputs[i].resolution_hours != resolution) {
        return absl::InvalidArgumentError(absl::StrCat(
            "config: data.resample_hours: inputs have different resolutions (",
            resolution, "h and ", d.inputs[i].resolution_hours,
            "h); set a common resample block"));
      }
    }
  }

  std::vector<TimeTable> tables;
  for (size_t i = 0; i < d.inputs.size(); ++i) {
    const InputSpec& in = d.inputs[i];
    ASSIGN_OR_RETURN(TimeTable t,
                     timeseries::LoadTable(config.ResolveInput(in.path), in.resolution_hours));
    if (t.resolution_hours() != resolution) {
      auto resampled = timeseries::ResampleMean(t, resolution);
      if (!resampled.ok()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "config: data.inputs[", i, "]: ", resampled.status().message()));
      }
      t = *std::move(resampled);
    }
    tables.push_back(std::move(t));
  }
  ASSIGN_OR_RETURN(TimeTable grid, timeseries::MergeOnGrid(tables));

  FeatureBuild build;
  build.resolution_hours = resolution;
  build.grid_rows = grid.size();

  for (size_t i = 0; i < d.residual_loads.size(); ++i) {
    const ResidualLoadSpec& rl = d.residual_loads[i];
    const std::string field = absl::StrCat("data.residual_loads[", i, "]");
    timeseries::ResidualLoadInputs in;
    ASSIGN_OR_RETURN(in.load_forecast, Column(grid, rl.load, field + ".load"));
    ASSIGN_OR_RETURN(in.wind_forecast, Column(grid, rl.wind, field + ".wind"));
    ASSIGN_OR_RETURN(in.solar_forecast, Column(grid, rl.solar, field + ".solar"));
    ASSIGN_OR_RETURN(in.ror_actual, Column(grid, rl.ror, field + ".ror"));
    ASSIGN_OR_RETURN(std::vector<double> values,
                     timeseries::ResidualLoad(in, rl.ror_lag_days, resolution));
    RETURN_IF_ERROR(grid.AddColumn(rl.name, std::move(values)));
  }

  if (d.mixed_price.has_value()) {
    const MixedPriceSpec& mp = *d.mixed_price;
    timeseries::PriceInputs in;
    ASSIGN_OR_RETURN(in.capacity_price,
                     Column(grid, mp.capacity, "data.mixed_price.capacity"));
    ASSIGN_OR_RETURN(in.energy_price, Column(grid, mp.energy, "data.mixed_price.energy"));
    in.alpha = mp.alpha;
    ASSIGN_OR_RETURN(timeseries::MixedPriceResult result, timeseries::MixedPrice(in));
    for (auto& w : result.warnings) build.warnings.push_back(std::move(w));
    RETURN_IF_ERROR(grid.AddColumn(mp.name, std::move(result.values)));
  }

  for (size_t i = 0; i < d.moving_averages.size(); ++i) {
    const MovingAverageSpec& ma = d.moving_averages[i];
    ASSIGN_OR_RETURN(
        std::span<const double> source,
        Column(grid, ma.column, absl::StrCat("data.moving_averages[", i, "].column")));
    ASSIGN_OR_RETURN(std::vector<double> values,
                     timeseries::MovingAverageDays(source, ma.days, resolution));
    RETURN_IF_ERROR(grid.AddColumn(ma.name, std::move(values)));
  }

  for (size_t i = 0; i < d.features.size(); ++i) {
    RETURN_IF_ERROR(
        Column(grid, d.features[i], absl::StrCat("data.features[", i, "]")).status());
  }
  RETURN_IF_ERROR(Column(grid, d.target, "data.target").status());

  const std::vector<TimeTable> merged = {grid};
  ASSIGN_OR_RETURN(const timeseries::FeatureMatrix all,
                   timeseries::AlignJoin(merged, d.features, d.target));
  ASSIGN_OR_RETURN(build.before, CutPeriod(grid, all, config.before));
  ASSIGN_OR_RETURN(build.after, CutPeriod(grid, all, config.after));
  return build;
}

}  // namespace regime_xai::cli
