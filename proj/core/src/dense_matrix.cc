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

#include "regime_xai/utils/dense_matrix.h"

#include <algorithm>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace regime_xai {

absl::StatusOr<DenseMatrix> DenseMatrix::FromValues(size_t rows, size_t cols,
                                                    std::vector<double> values) {
  if (values.size() != rows * cols) {
    return absl::InvalidArgumentError(
        absl::StrCat("Matrix of shape ", rows, "x", cols, " needs ",
                     rows * cols, " values, got ", values.size()));
  }
  DenseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.values_ = std::move(values);
  return m;
}

absl::StatusOr<DenseMatrix> DenseMatrix::FromRows(
    const std::vector<std::vector<double>>& rows) {
  const size_t cols = rows.empty() ? 0 : rows.front().size();
  DenseMatrix m(0, cols);
  m.values_.reserve(rows.size() * cols);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Ragged rows: row ", r, " has ", rows[r].size(), " values, expected ",
          cols));
    }
    m.AppendRow(rows[r]);
  }
  return m;
}

std::vector<double> DenseMatrix::Column(size_t c) const {
  std::vector<double> out(rows_);
  for (size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

DenseMatrix DenseMatrix::SelectRows(std::span<const size_t> rows) const {
  DenseMatrix out(0, cols_);
  out.values_.reserve(rows.size() * cols_);
  for (size_t r : rows) out.AppendRow(Row(r));
  return out;
}

void DenseMatrix::AppendRow(std::span<const double> row) {
  values_.insert(values_.end(), row.begin(), row.end());
  ++rows_;
}

}  // namespace regime_xai
