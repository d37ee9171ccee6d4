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

#ifndef REGIME_XAI_TOOLS_CLI_PIPELINE_H_
#define REGIME_XAI_TOOLS_CLI_PIPELINE_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "cli/run_config.h"
#include "regime_xai/timeseries/feature_matrix.h"

namespace regime_xai::cli {

struct PeriodData {
  experiment::PeriodSpec spec;
  timeseries::FeatureMatrix matrix;
  // Grid rows inside the period before the missing-cell policy.
  size_t grid_rows = 0;
};

struct FeatureBuild {
  int resolution_hours = 1;
  size_t grid_rows = 0;
  PeriodData before;
  PeriodData after;
  std::vector<std::string> warnings;
};

// Loads every input, resamples to the working resolution, merges on one grid,
// derives residual loads, mixed price and moving averages, and cuts the
// feature matrix into the two periods.
absl::StatusOr<FeatureBuild> BuildFeatures(const RunConfig& config);

}  // namespace regime_xai::cli

#endif  // REGIME_XAI_TOOLS_CLI_PIPELINE_H_
