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

#ifndef REGIME_XAI_TOOLS_CLI_RUN_CONFIG_H_
#define REGIME_XAI_TOOLS_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "nlohmann/json.hpp"
#include "regime_xai/experiment/experiment.h"

namespace regime_xai::cli {

struct InputSpec {
  std::string path;  // relative paths resolve against the config directory
  int resolution_hours = 1;
};

// load - wind - solar - trailing run-of-river mean.
struct ResidualLoadSpec {
  std::string name;
  std::string load;
  std::string wind;
  std::string solar;
  std::string ror;
  int ror_lag_days = 7;
};

struct MixedPriceSpec {
  std::string name;
  std::string capacity;
  std::string energy;
  double alpha = 0.0;
};

struct MovingAverageSpec {
  std::string name;
  std::string column;
  int days = 30;
};

struct DataConfig {
  std::vector<InputSpec> inputs;
  // 0 keeps the native resolution of the inputs.
  int resample_hours = 0;
  std::vector<ResidualLoadSpec> residual_loads;
  std::optional<MixedPriceSpec> mixed_price;
  std::vector<MovingAverageSpec> moving_averages;
  std::vector<std::string> features;
  std::string target;
};

struct RunConfig {
  uint64_t seed = 0;
  experiment::ModelKind model = experiment::ModelKind::kGbt;
  DataConfig data;
  experiment::PeriodSpec before;
  experiment::PeriodSpec after;
  experiment::ExperimentConfig experiment;
  std::string output_dir;

  // Directory of the config file; anchors relative paths.
  std::filesystem::path base_dir;
  // `--set` arguments in the order given.
  std::vector<std::string> overrides;

  std::filesystem::path ResolveInput(const std::string& path) const;
};

// Applies one `dotted.key=value` override. The value is read as JSON when it
// parses as JSON and as a plain string otherwise. Numeric path segments index
// into arrays.
absl::Status ApplyOverride(nlohmann::json& doc, absl::string_view assignment);

// Strict parse: unknown keys and type mismatches are errors naming the field
// path, e.g. `data.inputs[0].resolution_hours`.
absl::StatusOr<RunConfig> ParseRunConfig(const nlohmann::json& doc);

// Reads `path`, applies `overrides`, parses and validates.
absl::StatusOr<RunConfig> LoadRunConfig(const std::filesystem::path& path,
                                        const std::vector<std::string>& overrides);

// Canonical form with every default filled in. Parsing it reproduces the
// config exactly.
nlohmann::json RunConfigToJson(const RunConfig& config);

absl::Status ValidateRunConfig(const RunConfig& config);

}  // namespace regime_xai::cli

#endif  // REGIME_XAI_TOOLS_CLI_RUN_CONFIG_H_
