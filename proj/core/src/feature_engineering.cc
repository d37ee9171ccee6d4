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

#include "regime_xai/timeseries/feature_engineering.h"

#include <algorithm>
#include <map>
#include <optional>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "regime_xai/utils/status_macros.h"

namespace regime_xai::timeseries {
namespace {

absl::StatusOr<int> SamplesPerDays(int days, int resolution_hours) {
  if (resolution_hours < 1 || (days * 24) % resolution_hours != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        days, " day(s) is not a whole number of ", resolution_hours,
        "h samples"));
  }
  return days * 24 / resolution_hours;
}

}  // namespace

absl::StatusOr<TimeTable> ResampleMean(const TimeTable& table,
                                       int block_hours) {
  const int res = table.resolution_hours();
  if (block_hours <= 0 || block_hours % res != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("Block of ", block_hours,
                     "h is not a positive multiple of the table resolution ",
                     res, "h"));
  }
  const size_t k = static_cast<size_t>(block_hours / res);
  const size_t n_blocks = table.size() / k;

  std::vector<Instant> timestamps(n_blocks);
  for (size_t b = 0; b < n_blocks; ++b) timestamps[b] = table.timestamps()[b * k];

  std::vector<Column> columns;
  for (const auto& col : table.columns()) {
    Column out{col.name, std::vector<double>(n_blocks, kMissing)};
    for (size_t b = 0; b < n_blocks; ++b) {
      double sum = 0.0;
      size_t count = 0;
      for (size_t i = b * k; i < (b + 1) * k; ++i) {
        if (IsMissing(col.values[i])) continue;
        sum += col.values[i];
        ++count;
      }
      if (count > 0) out.values[b] = sum / static_cast<double>(count);
    }
    columns.push_back(std::move(out));
  }
  return TimeTable::Create(std::move(timestamps), block_hours,
                           std::move(columns));
}

absl::StatusOr<std::vector<double>> MovingAverage(
    std::span<const double> series, int window_samples) {
  if (series.empty()) {
    return absl::InvalidArgumentError("Moving average of an empty series");
  }
  if (window_samples < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("Window must be >= 1 sample, got ", window_samples));
  }
  const size_t w = static_cast<size_t>(window_samples);
  std::vector<double> out(series.size(), kMissing);
  double sum = 0.0;
  size_t count = 0;
  for (size_t i = 0; i < series.size(); ++i) {
    if (!IsMissing(series[i])) {
      sum += series[i];
      ++count;
    }
    if (i >= w && !IsMissing(series[i - w])) {
      sum -= series[i - w];
      --count;
    }
    if (count > 0) out[i] = sum / static_cast<double>(count);
  }
  return out;
}

absl::StatusOr<std::vector<double>> MovingAverageDays(
    std::span<const double> series, int window_days, int resolution_hours) {
  if (window_days < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("Window must be >= 1 day, got ", window_days));
  }
  ASSIGN_OR_RETURN(const int samples,
                   SamplesPerDays(window_days, resolution_hours));
  return MovingAverage(series, samples);
}

absl::StatusOr<std::vector<double>> ResidualLoad(const ResidualLoadInputs& in,
                                                 int ror_lag_days,
                                                 int resolution_hours) {
  const size_t n = in.load_forecast.size();
  if (in.wind_forecast.size() != n || in.solar_forecast.size() != n ||
      in.ror_actual.size() != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Residual load inputs are misaligned: load=", n,
        " wind=", in.wind_forecast.size(), " solar=", in.solar_forecast.size(),
        " ror=", in.ror_actual.size()));
  }
  if (ror_lag_days < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("ROR lag must be >= 1 day, got ", ror_lag_days));
  }
  ASSIGN_OR_RETURN(const int lag_samples,
                   SamplesPerDays(ror_lag_days, resolution_hours));
  const size_t lag = static_cast<size_t>(lag_samples);

  std::vector<double> out(n, kMissing);
  // Running sum over ror_actual[t - lag, t).
  double sum = 0.0;
  size_t count = 0;
  for (size_t t = 0; t < n; ++t) {
    if (t >= lag) {
      const double ror_mean =
          count > 0 ? sum / static_cast<double>(count) : kMissing;
      // Missing operands propagate through the NaN arithmetic.
      out[t] = in.load_forecast[t] - in.wind_forecast[t] -
               in.solar_forecast[t] - ror_mean;
    }
    if (!IsMissing(in.ror_actual[t])) {
      sum += in.ror_actual[t];
      ++count;
    }
    if (t >= lag && !IsMissing(in.ror_actual[t - lag])) {
      sum -= in.ror_actual[t - lag];
      --count;
    }
  }
  return out;
}

absl::StatusOr<MixedPriceResult> MixedPrice(const PriceInputs& p) {
  if (!(p.alpha >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Mixed-price alpha must be >= 0, got ", p.alpha));
  }
  if (p.capacity_price.size() != p.energy_price.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Capacity and energy price series are misaligned: ",
        p.capacity_price.size(), " vs ", p.energy_price.size()));
  }
  MixedPriceResult result;
  result.values.resize(p.capacity_price.size());
  for (size_t i = 0; i < result.values.size(); ++i) {
    result.values[i] = p.capacity_price[i] + p.alpha * p.energy_price[i];
  }
  if (p.alpha > kMixedPriceAlphaWarnAbove) {
    result.warnings.push_back(absl::StrFormat(
        "alpha=%g is outside the single-digit percentage range (> %g)",
        p.alpha, kMixedPriceAlphaWarnAbove));
  }
  return result;
}

absl::StatusOr<FeatureMatrix> AlignJoin(
    std::span<const TimeTable> tables,
    const std::vector<std::string>& feature_cols,
    const std::string& target_col) {
  if (tables.empty()) {
    return absl::InvalidArgumentError("AlignJoin needs at least one table");
  }
  const int res = tables.front().resolution_hours();
  for (const auto& t : tables) {
    if (t.resolution_hours() != res) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Tables have different resolutions: ", res, "h vs ",
          t.resolution_hours(), "h; resample first"));
    }
  }

  // Locate each requested column.
  struct Source {
    size_t table;
    std::span<const double> values;
  };
  const auto locate = [&](const std::string& name,
                          bool is_target) -> absl::StatusOr<Source> {
    std::optional<Source> found;
    for (size_t i = 0; i < tables.size(); ++i) {
      auto col = tables[i].column(name);
      if (!col.ok()) continue;
      if (found.has_value()) {
        return absl::InvalidArgumentError(
            absl::StrCat("Column '", name, "' is ambiguous: present in tables ",
                         found->table, " and ", i));
      }
      found = Source{i, *col};
    }
    if (!found.has_value()) {
      return absl::NotFoundError(absl::StrCat(
          is_target ? "Target" : "Feature", " column '", name, "' not found"));
    }
    return *found;
  };
  std::vector<Source> features;
  for (const auto& name : feature_cols) {
    ASSIGN_OR_RETURN(Source s, locate(name, false));
    features.push_back(s);
  }
  ASSIGN_OR_RETURN(const Source target, locate(target_col, true));

  // Timestamp intersection: walk the first table and look the instant up in
  // the others (all sorted).
  std::vector<std::vector<size_t>> row_of(tables.size());
  const auto& base = tables.front().timestamps();
  for (size_t r = 0; r < base.size(); ++r) {
    std::vector<size_t> hit(tables.size());
    bool all = true;
    for (size_t i = 0; i < tables.size() && all; ++i) {
      const auto& ts = tables[i].timestamps();
      auto it = std::lower_bound(ts.begin(), ts.end(), base[r]);
      if (it == ts.end() || *it != base[r]) {
        all = false;
      } else {
        hit[i] = static_cast<size_t>(it - ts.begin());
      }
    }
    if (!all) continue;
    for (size_t i = 0; i < tables.size(); ++i) row_of[i].push_back(hit[i]);
  }
  const size_t n_joined = row_of.front().size();
  if (n_joined == 0) {
    return absl::FailedPreconditionError(
        "AlignJoin: tables share no timestamps");
  }

  FeatureMatrix m;
  m.feature_names = feature_cols;
  m.target_name = target_col;
  m.resolution_hours = res;
  m.x = DenseMatrix(0, feature_cols.size());
  std::vector<double> row(feature_cols.size());
  for (size_t j = 0; j < n_joined; ++j) {
    bool missing = false;
    for (size_t f = 0; f < features.size(); ++f) {
      row[f] = features[f].values[row_of[features[f].table][j]];
      missing |= IsMissing(row[f]);
    }
    const double y = target.values[row_of[target.table][j]];
    missing |= IsMissing(y);
    if (missing) {
      ++m.dropped_rows;
      continue;
    }
    m.x.AppendRow(row);
    m.y.push_back(y);
    m.timestamps.push_back(base[row_of.front()[j]]);
  }
  return m;
}

absl::StatusOr<TimeTable> MergeOnGrid(std::span<const TimeTable> tables) {
  if (tables.empty()) {
    return absl::InvalidArgumentError("MergeOnGrid needs at least one table");
  }
  const int res = tables.front().resolution_hours();
  Instant start = Instant::min();
  Instant end = Instant::max();
  for (const auto& t : tables) {
    if (t.resolution_hours() != res) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Tables have different resolutions: ", res, "h vs ",
          t.resolution_hours(), "h; resample first"));
    }
    if (t.size() == 0) {
      return absl::FailedPreconditionError("MergeOnGrid: empty input table");
    }
    start = std::max(start, t.timestamps().front());
    end = std::min(end, t.timestamps().back());
  }
  if (start > end) {
    return absl::FailedPreconditionError(
        "MergeOnGrid: input tables do not overlap in time");
  }
  std::vector<Instant> grid;
  for (Instant t = start; t <= end; t = AddHours(t, res)) grid.push_back(t);

  std::vector<Column> columns;
  for (const auto& table : tables) {
    const auto& ts = table.timestamps();
    for (const auto& col : table.columns()) {
      Column out{col.name, std::vector<double>(grid.size(), kMissing)};
      for (size_t g = 0; g < grid.size(); ++g) {
        auto it = std::lower_bound(ts.begin(), ts.end(), grid[g]);
        if (it != ts.end() && *it == grid[g]) {
          out.values[g] = col.values[static_cast<size_t>(it - ts.begin())];
        }
      }
      columns.push_back(std::move(out));
    }
  }
  return TimeTable::Create(std::move(grid), res, std::move(columns));
}

}  // namespace regime_xai::timeseries
