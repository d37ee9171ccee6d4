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

#ifndef REGIME_XAI_TOOLS_CLI_VERIFY_H_
#define REGIME_XAI_TOOLS_CLI_VERIFY_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace regime_xai::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  // Worst observed error against the tolerance, or the failure reason.
  std::string detail;
};

struct VerifyOptions {
  uint64_t seed = 20260101;
  // Applied to each serialized tree ensemble before the tree engine reads it
  // back. Identity by default; tests use it to inject corruption.
  std::function<std::string(std::string)> tree_json_mutator;
};

// Reduced-size oracle and invariant checks. Needs no input data.
std::vector<CheckResult> RunVerifySuite(const VerifyOptions& options = {});

}  // namespace regime_xai::cli

#endif  // REGIME_XAI_TOOLS_CLI_VERIFY_H_
