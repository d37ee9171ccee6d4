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

#ifndef REGIME_XAI_UTILS_DENSE_MATRIX_H_
#define REGIME_XAI_UTILS_DENSE_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace regime_xai {

// Row-major matrix of doubles. Rows are the unit of access everywhere in the
// toolkit (one row = one model input), so rows are exposed as spans.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  // Fails if values.size() != rows * cols.
  static absl::StatusOr<DenseMatrix> FromValues(size_t rows, size_t cols,
                                                std::vector<double> values);
  // Fails on ragged input.
  static absl::StatusOr<DenseMatrix> FromRows(
      const std::vector<std::vector<double>>& rows);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  double& operator()(size_t r, size_t c) { return values_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return values_[r * cols_ + c]; }

  std::span<double> Row(size_t r) {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const double> Row(size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  std::vector<double> Column(size_t c) const;

  // Copies the given rows, in order, into a new matrix.
  DenseMatrix SelectRows(std::span<const size_t> rows) const;

  void AppendRow(std::span<const double> row);

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> values_;
};

}  // namespace regime_xai

#endif  // REGIME_XAI_UTILS_DENSE_MATRIX_H_
