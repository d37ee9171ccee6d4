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

#include "regime_xai/timeseries/feature_matrix.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "regime_xai/utils/number_format.h"

namespace regime_xai::timeseries {

absl::Status FeatureMatrix::Validate() const {
  if (feature_names.size() != x.cols()) {
    return absl::InvalidArgumentError(
        absl::StrCat("FeatureMatrix has ", feature_names.size(),
                     " feature names for ", x.cols(), " columns"));
  }
  if (x.rows() != y.size() || timestamps.size() != y.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "FeatureMatrix row counts disagree: x=", x.rows(), " y=", y.size(),
        " timestamps=", timestamps.size()));
  }
  const auto& v = x.values();
  if (std::any_of(v.begin(), v.end(), [](double d) { return !std::isfinite(d); }) ||
      std::any_of(y.begin(), y.end(), [](double d) { return !std::isfinite(d); })) {
    return absl::InvalidArgumentError("FeatureMatrix contains missing cells");
  }
  return absl::OkStatus();
}

FeatureMatrix FeatureMatrix::SelectRows(std::span<const size_t> rows) const {
  FeatureMatrix out;
  out.feature_names = feature_names;
  out.target_name = target_name;
  out.resolution_hours = resolution_hours;
  out.x = x.SelectRows(rows);
  out.y.reserve(rows.size());
  out.timestamps.reserve(rows.size());
  for (size_t r : rows) {
    out.y.push_back(y[r]);
    out.timestamps.push_back(timestamps[r]);
  }
  return out;
}

FeatureMatrix FeatureMatrix::SelectTimeRange(Instant start, Instant end) const {
  std::vector<size_t> rows;
  for (size_t r = 0; r < timestamps.size(); ++r) {
    if (timestamps[r] >= start && timestamps[r] < end) rows.push_back(r);
  }
  return SelectRows(rows);
}

std::string FeatureMatrixToCsv(const FeatureMatrix& m) {
  std::string out = "timestamp";
  for (const auto& f : m.feature_names) absl::StrAppend(&out, ",", f);
  absl::StrAppend(&out, ",", m.target_name, "\n");
  for (size_t r = 0; r < m.size(); ++r) {
    out += FormatTimestamp(m.timestamps[r]);
    for (double v : m.x.Row(r)) absl::StrAppend(&out, ",", FormatDouble(v));
    absl::StrAppend(&out, ",", FormatDouble(m.y[r]), "\n");
  }
  return out;
}

}  // namespace regime_xai::timeseries
