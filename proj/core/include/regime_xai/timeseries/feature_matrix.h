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

#ifndef REGIME_XAI_TIMESERIES_FEATURE_MATRIX_H_
#define REGIME_XAI_TIMESERIES_FEATURE_MATRIX_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "regime_xai/timeseries/timestamp.h"
#include "regime_xai/utils/dense_matrix.h"

namespace regime_xai::timeseries {

// Model-ready rows: one per retained timestamp, no missing cells.
struct FeatureMatrix {
  std::vector<std::string> feature_names;
  std::string target_name = "y";
  DenseMatrix x;
  std::vector<double> y;
  std::vector<Instant> timestamps;
  int resolution_hours = 1;
  // Rows removed by the missing-cell policy while building this matrix.
  size_t dropped_rows = 0;

  size_t size() const { return y.size(); }
  size_t num_features() const { return feature_names.size(); }

  // Checks shape consistency and the no-missing-values invariant.
  absl::Status Validate() const;

  // Copies the given rows (in order). dropped_rows is not carried over.
  FeatureMatrix SelectRows(std::span<const size_t> rows) const;

  // Rows with start <= timestamp < end.
  FeatureMatrix SelectTimeRange(Instant start, Instant end) const;
};

// `timestamp,<features...>,<target>` with shortest round-trip numerics.
std::string FeatureMatrixToCsv(const FeatureMatrix& m);

}  // namespace regime_xai::timeseries

#endif  // REGIME_XAI_TIMESERIES_FEATURE_MATRIX_H_
