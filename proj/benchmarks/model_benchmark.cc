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

#include <cmath>
#include <vector>

#include "benchmark/benchmark.h"
#include "cli/random_models.h"
#include "regime_xai/gbt/gbt.h"
#include "regime_xai/mlp/mlp.h"
#include "regime_xai/utils/random.h"

namespace regime_xai {
namespace {

std::vector<double> Target(const DenseMatrix& x, Rng& rng) {
  std::vector<double> y(x.rows());
  for (size_t r = 0; r < x.rows(); ++r) {
    y[r] = 3 * x(r, 0) + std::sin(x(r, 1)) + 0.5 * rng.Normal();
  }
  return y;
}

void BM_FitGbt(benchmark::State& state) {
  Rng rng(1);
  const DenseMatrix x = cli::RandomMatrix(rng, static_cast<size_t>(state.range(0)), 8);
  const std::vector<double> y = Target(x, rng);
  gbt::GbtParams p;
  p.n_trees = 100;
  for (auto _ : state) benchmark::DoNotOptimize(gbt::FitGbt(x, y, p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitGbt)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_FitMlp(benchmark::State& state) {
  Rng rng(2);
  const DenseMatrix x = cli::RandomMatrix(rng, 1000, 8);
  const std::vector<double> y = Target(x, rng);
  mlp::MlpParams p;
  p.max_epochs = 20;
  p.early_stop_patience = 100;
  for (auto _ : state) benchmark::DoNotOptimize(mlp::FitMlp(x, y, p));
}
BENCHMARK(BM_FitMlp)->Unit(benchmark::kMillisecond);

void BM_MlpPredictBatch(benchmark::State& state) {
  Rng rng(3);
  const auto net = cli::RandomMlp(rng, {8, 64, 64, 1});
  const DenseMatrix x = cli::RandomMatrix(rng, static_cast<size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(net.PredictBatch(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpPredictBatch)->Arg(1)->Arg(100)->Arg(10000);

void BM_GbtPredictBatch(benchmark::State& state) {
  Rng rng(4);
  const auto e = cli::RandomTreeEnsemble(rng, 8, 4, 300);
  const DenseMatrix x = cli::RandomMatrix(rng, static_cast<size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(e.PredictBatch(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GbtPredictBatch)->Arg(1)->Arg(100)->Arg(10000);

}  // namespace
}  // namespace regime_xai

BENCHMARK_MAIN();
