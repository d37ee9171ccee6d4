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

#ifndef REGIME_XAI_UTILS_RANDOM_H_
#define REGIME_XAI_UTILS_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace regime_xai {

// Mixes a parent seed with an index into an independent child seed
// (SplitMix64 finalizer). Used for per-window and per-row streams so that
// parallel and sequential execution consume identical randomness.
uint64_t DeriveSeed(uint64_t seed, uint64_t index);

// Seeded generator whose draws are defined here rather than by the standard
// library distributions, so outputs are identical across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double Uniform01();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }
  // Uniform integer in [0, n). n must be > 0.
  uint64_t UniformIndex(uint64_t n);
  // Standard normal (Box-Muller, one value per call).
  double Normal();

  // Fisher-Yates shuffle.
  template <typename T>
  void Shuffle(std::span<T> values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = UniformIndex(i);
      std::swap(values[i - 1], values[j]);
    }
  }

  // k distinct indices from [0, n), sorted ascending.
  std::vector<size_t> SampleWithoutReplacement(size_t n, size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace regime_xai

#endif  // REGIME_XAI_UTILS_RANDOM_H_
