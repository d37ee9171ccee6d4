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

#ifndef REGIME_XAI_UTILS_PARALLEL_H_
#define REGIME_XAI_UTILS_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace regime_xai {

// Worker count: REGIME_XAI_THREADS when set to a positive integer, otherwise
// the hardware concurrency (at least 1).
int DefaultThreadCount();

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
// processed exactly once; callers write results into pre-sized slots so the
// output order never depends on scheduling. threads <= 0 means
// DefaultThreadCount().
void ParallelFor(size_t n, int threads, const std::function<void(size_t)>& fn);

}  // namespace regime_xai

#endif  // REGIME_XAI_UTILS_PARALLEL_H_
