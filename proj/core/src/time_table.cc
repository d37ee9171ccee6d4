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

#include "regime_xai/timeseries/time_table.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "regime_xai/utils/number_format.h"
#include "regime_xai/utils/status_macros.h"

namespace regime_xai::timeseries {
namespace {

absl::Status CheckUniformSteps(const std::vector<Instant>& timestamps,
                               int resolution_hours) {
  const auto step = std::chrono::hours(resolution_hours);
  for (size_t i = 1; i < timestamps.size(); ++i) {
    const auto delta = timestamps[i] - timestamps[i - 1];
    if (delta <= std::chrono::seconds(0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Timestamps not strictly increasing at ",
          FormatTimestamp(timestamps[i])));
    }
    if (delta != step) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Resolution mismatch: step from ", FormatTimestamp(timestamps[i - 1]),
          " to ", FormatTimestamp(timestamps[i]), " is ",
          std::chrono::duration<double, std::ratio<3600>>(delta).count(),
          "h, expected ", resolution_hours, "h"));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<TimeTable> TimeTable::Create(std::vector<Instant> timestamps,
                                            int resolution_hours,
                                            std::vector<Column> columns) {
  if (resolution_hours < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("Resolution must be >= 1 hour, got ", resolution_hours));
  }
  RETURN_IF_ERROR(CheckUniformSteps(timestamps, resolution_hours));
  TimeTable table;
  table.timestamps_ = std::move(timestamps);
  table.resolution_hours_ = resolution_hours;
  for (auto& c : columns) {
    RETURN_IF_ERROR(table.AddColumn(std::move(c.name), std::move(c.values)));
  }
  return table;
}

bool TimeTable::HasColumn(absl::string_view name) const {
  return std::any_of(columns_.begin(), columns_.end(),
                     [&](const Column& c) { return c.name == name; });
}

absl::StatusOr<std::span<const double>> TimeTable::column(
    absl::string_view name) const {
  for (const auto& c : columns_) {
    if (c.name == name) return std::span<const double>(c.values);
  }
  return absl::NotFoundError(absl::StrCat("Unknown column '", name, "'"));
}

std::vector<std::string> TimeTable::ColumnNames() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const auto& c : columns_) names.push_back(c.name);
  return names;
}

absl::Status TimeTable::AddColumn(std::string name,
                                  std::vector<double> values) {
  if (name.empty() || name == "timestamp") {
    return absl::InvalidArgumentError(
        absl::StrCat("Invalid column name '", name, "'"));
  }
  if (HasColumn(name)) {
    return absl::AlreadyExistsError(
        absl::StrCat("Duplicate column '", name, "'"));
  }
  if (values.size() != timestamps_.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Column '", name, "' has ", values.size(), " values for ",
        timestamps_.size(), " timestamps"));
  }
  columns_.push_back({std::move(name), std::move(values)});
  return absl::OkStatus();
}

size_t TimeTable::MissingCount() const {
  size_t n = 0;
  for (const auto& c : columns_) {
    n += std::count_if(c.values.begin(), c.values.end(), IsMissing);
  }
  return n;
}

absl::StatusOr<TimeTable> ParseTableCsv(absl::string_view content,
                                        int expected_resolution_hours,
                                        absl::string_view source_name) {
  const auto error_at = [&](size_t line, absl::string_view message) {
    return absl::InvalidArgumentError(
        absl::StrCat(source_name, ":", line, ": ", message));
  };

  std::vector<absl::string_view> lines = absl::StrSplit(content, '\n');
  size_t line_index = 0;
  auto next_line = [&](absl::string_view* out) {
    while (line_index < lines.size()) {
      absl::string_view l = absl::StripSuffix(lines[line_index++], "\r");
      if (!absl::StripAsciiWhitespace(l).empty()) {
        *out = l;
        return true;
      }
    }
    return false;
  };

  absl::string_view header_line;
  if (!next_line(&header_line)) return error_at(1, "missing header row");
  std::vector<std::string> header;
  for (absl::string_view cell : absl::StrSplit(header_line, ',')) {
    header.emplace_back(absl::StripAsciiWhitespace(cell));
  }
  if (header.empty() || header[0] != "timestamp") {
    return error_at(line_index, "first column must be named 'timestamp'");
  }
  {
    std::unordered_set<std::string> seen;
    for (size_t c = 1; c < header.size(); ++c) {
      if (header[c].empty()) return error_at(line_index, "empty column name");
      if (!seen.insert(header[c]).second) {
        return error_at(line_index,
                        absl::StrCat("duplicate column '", header[c], "'"));
      }
    }
  }

  struct Row {
    Instant t;
    size_t line;
    std::vector<double> values;
  };
  std::vector<Row> rows;
  absl::string_view line;
  while (next_line(&line)) {
    const size_t line_no = line_index;
    std::vector<absl::string_view> cells = absl::StrSplit(line, ',');
    if (cells.size() != header.size()) {
      return error_at(line_no, absl::StrCat("expected ", header.size(),
                                            " fields, got ", cells.size()));
    }
    auto t = ParseTimestamp(absl::StripAsciiWhitespace(cells[0]));
    if (!t.ok()) return error_at(line_no, t.status().message());
    Row row{*t, line_no, {}};
    row.values.reserve(cells.size() - 1);
    for (size_t c = 1; c < cells.size(); ++c) {
      const absl::string_view cell = absl::StripAsciiWhitespace(cells[c]);
      if (cell.empty()) {
        row.values.push_back(kMissing);
        continue;
      }
      const auto v = ParseFiniteDouble(cell);
      if (!v.has_value()) {
        return error_at(line_no, absl::StrCat("column '", header[c],
                                              "': not a finite number: '",
                                              cell, "'"));
      }
      row.values.push_back(*v);
    }
    rows.push_back(std::move(row));
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.t < b.t; });
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].t == rows[i - 1].t) {
      return error_at(rows[i].line,
                      absl::StrCat("duplicate timestamp ",
                                   FormatTimestamp(rows[i].t),
                                   " (first seen on line ", rows[i - 1].line,
                                   ")"));
    }
  }

  std::vector<Instant> timestamps;
  timestamps.reserve(rows.size());
  std::vector<Column> columns(header.size() - 1);
  for (size_t c = 1; c < header.size(); ++c) {
    columns[c - 1].name = header[c];
    columns[c - 1].values.reserve(rows.size());
  }
  for (const auto& row : rows) {
    timestamps.push_back(row.t);
    for (size_t c = 0; c < row.values.size(); ++c) {
      columns[c].values.push_back(row.values[c]);
    }
  }
  auto table = TimeTable::Create(std::move(timestamps),
                                 expected_resolution_hours, std::move(columns));
  if (!table.ok()) {
    return absl::Status(table.status().code(),
                        absl::StrCat(source_name, ": ", table.status().message()));
  }
  return table;
}

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("Cannot open '", path.string(), "' for reading"));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

absl::Status WriteFile(const std::filesystem::path& path,
                       absl::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("Cannot open '", path.string(), "' for writing"));
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    return absl::DataLossError(
        absl::StrCat("Write to '", path.string(), "' failed"));
  }
  return absl::OkStatus();
}

absl::StatusOr<TimeTable> LoadTable(const std::filesystem::path& path,
                                    int expected_resolution_hours) {
  ASSIGN_OR_RETURN(const std::string content, ReadFile(path));
  return ParseTableCsv(content, expected_resolution_hours, path.string());
}

std::string TableToCsv(const TimeTable& table) {
  std::string out = "timestamp";
  for (const auto& c : table.columns()) absl::StrAppend(&out, ",", c.name);
  out += "\n";
  for (size_t r = 0; r < table.size(); ++r) {
    out += FormatTimestamp(table.timestamps()[r]);
    for (const auto& c : table.columns()) {
      absl::StrAppend(&out, ",", FormatDouble(c.values[r]));
    }
    out += "\n";
  }
  return out;
}

absl::Status WriteTable(const TimeTable& table,
                        const std::filesystem::path& path) {
  return WriteFile(path, TableToCsv(table));
}

}  // namespace regime_xai::timeseries
