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

#ifndef REGIME_XAI_TIMESERIES_TIMESTAMP_H_
#define REGIME_XAI_TIMESERIES_TIMESTAMP_H_

#include <chrono>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace regime_xai::timeseries {

using Instant = std::chrono::sys_seconds;

// Strict `YYYY-MM-DDThh:mm:ssZ` (UTC only).
absl::StatusOr<Instant> ParseTimestamp(absl::string_view text);
std::string FormatTimestamp(Instant t);

inline Instant AddHours(Instant t, long hours) {
  return t + std::chrono::hours(hours);
}

}  // namespace regime_xai::timeseries

#endif  // REGIME_XAI_TIMESERIES_TIMESTAMP_H_
