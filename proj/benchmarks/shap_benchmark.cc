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

#include <cstdint>

#include "benchmark/benchmark.h"
#include "cli/random_models.h"
#include "regime_xai/shap/shap.h"
#include "regime_xai/utils/random.h"

namespace regime_xai::shap {
namespace {

// TreeSHAP cost grows with trees x background; exact cost with 2^n.
void BM_TreeShap(benchmark::State& state) {
  Rng rng(1);
  const size_t n = static_cast<size_t>(state.range(0));
  const auto e = cli::RandomTreeEnsemble(rng, n, 4, 100);
  const auto bg = *Background::Create(cli::RandomMatrix(rng, 50, n));
  const DenseMatrix x = cli::RandomMatrix(rng, 1, n);
  for (auto _ : state) benchmark::DoNotOptimize(TreeShap(e, x.Row(0), bg));
}
BENCHMARK(BM_TreeShap)->Arg(6)->Arg(12)->Arg(24);

void BM_ExactShapOnTrees(benchmark::State& state) {
  Rng rng(1);
  const size_t n = static_cast<size_t>(state.range(0));
  const auto model = Model::FromTreeEnsemble(cli::RandomTreeEnsemble(rng, n, 4, 100));
  const auto bg = *Background::Create(cli::RandomMatrix(rng, 50, n));
  const DenseMatrix x = cli::RandomMatrix(rng, 1, n);
  for (auto _ : state) benchmark::DoNotOptimize(ExactShap(model, x.Row(0), bg));
}
BENCHMARK(BM_ExactShapOnTrees)->Arg(6)->Arg(10);

void BM_KernelShap(benchmark::State& state) {
  Rng rng(2);
  const int n = static_cast<int>(state.range(0));
  const auto model = Model::FromMlp(cli::RandomMlp(rng, {n, 64, 64, 1}));
  const auto bg = *Background::Create(cli::RandomMatrix(rng, 100, n));
  const DenseMatrix x = cli::RandomMatrix(rng, 1, n);
  KernelShapOptions opt;
  opt.seed = 3;
  for (auto _ : state) benchmark::DoNotOptimize(KernelShap(model, x.Row(0), bg, opt));
}
BENCHMARK(BM_KernelShap)->Arg(3)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace regime_xai::shap

BENCHMARK_MAIN();
