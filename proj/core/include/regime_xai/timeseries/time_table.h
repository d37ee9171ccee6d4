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

#ifndef REGIME_XAI_TIMESERIES_TIME_TABLE_H_
#define REGIME_XAI_TIMESERIES_TIME_TABLE_H_

#include <cmath>
#include <filesystem>
#include <limits>
#include <span>
#include <string>

#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "regime_xai/timeseries/timestamp.h"

namespace regime_xai::timeseries {

// Missing cells are quiet NaNs. CSV ingestion rejects NaN/inf text, so a NaN
// inside a TimeTable always means "no observation".
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool IsMissing(double v) { return std::isnan(v); }

struct Column {
  std::string name;
  std::vector<double> values;
};

// Timestamp-indexed table of named numeric series on a uniform grid.
//
// Invariants (enforced by Create and AddColumn):
//  * timestamps strictly increasing with a constant step of
//    resolution_hours;
//  * every column has one value per timestamp;
//  * column names are unique.
class TimeTable {
 public:
  TimeTable() = default;

  static absl::StatusOr<TimeTable> Create(std::vector<Instant> timestamps,
                                          int resolution_hours,
                                          std::vector<Column> columns);

  size_t size() const { return timestamps_.size(); }
  int resolution_hours() const { return resolution_hours_; }
  const std::vector<Instant>& timestamps() const { return timestamps_; }
  const std::vector<Column>& columns() const { return columns_; }

  bool HasColumn(absl::string_view name) const;
  absl::StatusOr<std::span<const double>> column(absl::string_view name) const;
  std::vector<std::string> ColumnNames() const;

  absl::Status AddColumn(std::string name, std::vector<double> values);

  size_t MissingCount() const;

 private:
  std::vector<Instant> timestamps_;
  int resolution_hours_ = 1;
  std::vector<Column> columns_;
};

// Parses CSV text: header row whose first column is `timestamp`, ISO-8601 UTC
// instants, decimal numerics, empty cell = missing. Rows are sorted by time.
// Errors carry `source_name` and the 1-based line number of the offending row.
absl::StatusOr<TimeTable> ParseTableCsv(absl::string_view content,
                                        int expected_resolution_hours,
                                        absl::string_view source_name = "<csv>");

absl::StatusOr<TimeTable> LoadTable(const std::filesystem::path& path,
                                    int expected_resolution_hours);

std::string TableToCsv(const TimeTable& table);
absl::Status WriteTable(const TimeTable& table,
                        const std::filesystem::path& path);

// Reads a whole file into memory.
absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);
absl::Status WriteFile(const std::filesystem::path& path,
                       absl::string_view content);

}  // namespace regime_xai::timeseries

#endif  // REGIME_XAI_TIMESERIES_TIME_TABLE_H_
