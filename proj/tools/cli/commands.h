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

#ifndef REGIME_XAI_TOOLS_CLI_COMMANDS_H_
#define REGIME_XAI_TOOLS_CLI_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "cli/verify.h"

namespace regime_xai::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

struct CommandOptions {
  std::string config_path;
  std::vector<std::string> overrides;  // `key=value`
  std::string out_dir;
};

// One JSON object per line on `err`.
class Logger {
 public:
  explicit Logger(std::ostream& err, std::string command)
      : err_(err), command_(std::move(command)) {}
  void Info(const std::string& message) const;
  void Warn(const std::string& message) const;
  void Error(const absl::Status& status) const;

 private:
  void Emit(const char* level, const std::string& message,
            const char* code) const;
  std::ostream& err_;
  std::string command_;
};

// Writes features_<period>.csv for both periods and feature_report.json.
absl::Status CmdFeatures(const CommandOptions& options, const Logger& log);

// Runs both periods, compares them and writes every report plus
// manifest.json.
absl::Status CmdRun(const CommandOptions& options, const Logger& log);

// Writes synth.csv and a ready-to-run config.json. The optional config holds
// rows_per_period, seed, noise_sigma, resolution_hours and model.
absl::Status CmdSynth(const CommandOptions& options, const Logger& log);

// Prints one PASS/FAIL line per check to `out`; fails if any check fails.
// With an output directory, also writes verify_report.json there.
absl::Status CmdVerify(const CommandOptions& options,
                       const VerifyOptions& verify, std::ostream& out,
                       const Logger& log);

// Validation problems (bad config, bad input data) map to 1, everything else
// to 2.
int ExitCodeFor(const absl::Status& status);

// Full command line, as main() would see it.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace regime_xai::cli

#endif  // REGIME_XAI_TOOLS_CLI_COMMANDS_H_
