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

#ifndef REGIME_XAI_UTILS_NUMBER_FORMAT_H_
#define REGIME_XAI_UTILS_NUMBER_FORMAT_H_

#include <optional>
#include <string>

#include "absl/strings/string_view.h"

namespace regime_xai {

// Shortest decimal text that parses back to exactly `value`. Missing (NaN)
// values format as the empty string, matching the CSV missing-cell rule.
std::string FormatDouble(double value);

// Parses a finite decimal number occupying all of `text` (surrounding
// whitespace allowed). Returns nullopt for anything else, including
// "nan"/"inf" spellings.
std::optional<double> ParseFiniteDouble(absl::string_view text);

}  // namespace regime_xai

#endif  // REGIME_XAI_UTILS_NUMBER_FORMAT_H_
