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

#ifndef REGIME_XAI_UTILS_STATUS_MACROS_H_
#define REGIME_XAI_UTILS_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define REGIME_XAI_CONCAT_INNER_(a, b) a##b
#define REGIME_XAI_CONCAT_(a, b) REGIME_XAI_CONCAT_INNER_(a, b)

// Evaluates an expression returning absl::Status and returns it from the
// enclosing function when not OK.
#define RETURN_IF_ERROR(expr)                    \
  do {                                           \
    const absl::Status _status_ = (expr);        \
    if (!_status_.ok()) return _status_;         \
  } while (0)

#define ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                           \
  if (!statusor.ok()) return statusor.status();      \
  lhs = std::move(statusor).value()

// ASSIGN_OR_RETURN(auto x, FunctionReturningStatusOr());
#define ASSIGN_OR_RETURN(lhs, rexpr) \
  ASSIGN_OR_RETURN_IMPL_(            \
      REGIME_XAI_CONCAT_(_statusor_, __LINE__), lhs, rexpr)

#endif  // REGIME_XAI_UTILS_STATUS_MACROS_H_
