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

#include <string>

#include "absl/strings/str_cat.h"
#include "regime_xai/experiment/experiment.h"
#include "regime_xai/utils/number_format.h"

namespace regime_xai::experiment {

std::string ImportanceCsv(std::span<const PeriodResult> results) {
  std::string out = "period,window,feature,fi\n";
  for (const auto& p : results) {
    for (const auto& w : p.windows) {
      for (size_t f = 0; f < p.feature_names.size(); ++f) {
        absl::StrAppend(&out, p.period_name, ",", w.window_index, ",",
                        p.feature_names[f], ",",
                        FormatDouble(w.importance.fi[f]), "\n");
      }
    }
  }
  return out;
}

std::string ComparisonCsv(const RegimeComparison& comparison) {
  std::string out =
      "feature,before_mean,before_std,after_mean,after_std,delta,flagged\n";
  for (const auto& s : comparison.features) {
    absl::StrAppend(&out, s.feature, ",", FormatDouble(s.before_mean), ",",
                    FormatDouble(s.before_std), ",", FormatDouble(s.after_mean),
                    ",", FormatDouble(s.after_std), ",", FormatDouble(s.delta),
                    ",", s.flagged ? "true" : "false", "\n");
  }
  return out;
}

std::string DependenceCsv(std::span<const PeriodResult> results) {
  std::string out = "period,window,timestamp,feature,x_value,phi_value\n";
  for (const auto& p : results) {
    for (size_t f = 0; f < p.feature_names.size(); ++f) {
      for (const auto& w : p.windows) {
        for (size_t r = 0; r < w.explanation.rows(); ++r) {
          absl::StrAppend(&out, p.period_name, ",", w.window_index, ",",
                          timeseries::FormatTimestamp(w.explained_timestamps[r]),
                          ",", p.feature_names[f], ",",
                          FormatDouble(w.explained_x(r, f)), ",",
                          FormatDouble(w.explanation.phi(r, f)), "\n");
        }
      }
    }
  }
  return out;
}

}  // namespace regime_xai::experiment
