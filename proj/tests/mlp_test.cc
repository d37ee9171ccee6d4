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

#include <algorithm>
#include <cmath>
#include <vector>

#include "cli/random_models.h"
#include "gtest/gtest.h"
#include "regime_xai/mlp/mlp.h"
#include "regime_xai/utils/random.h"
#include "test_util.h"

namespace regime_xai::mlp {
namespace {

// Hand-set 2-2-1 net: h = relu(W1 x + b1), out = w2 . h + b2.
MlpNet TinyNet() {
  MlpNet net = MlpNet::Initialize({2, 2, 1}, 0);
  net.weights[0] << 1.0, -2.0,  //
      0.5, 0.25;
  net.biases[0] << 0.1, -1.0;
  net.weights[1] << 3.0, -1.0;
  net.biases[1] << 0.5;
  return net;
}

TEST(MlpNetTest, ForwardPassMatchesHandArithmetic) {
  const MlpNet net = TinyNet();
  const std::vector<double> x = {2.0, 0.5};
  // h1 = relu(2 - 1 + 0.1) = 1.1; h2 = relu(1 + 0.125 - 1) = 0.125.
  EXPECT_DOUBLE_EQ(net.PredictRow(x), 3.0 * 1.1 - 0.125 + 0.5);
  const std::vector<double> x2 = {-1.0, 0.0};
  // h1 = relu(-1 + 0.1) = 0; h2 = relu(-0.5 - 1) = 0.
  EXPECT_DOUBLE_EQ(net.PredictRow(x2), 0.5);
}

TEST(MlpNetTest, StandardizationAppliesBeforeFirstLayer) {
  MlpNet net = TinyNet();
  net.input_mean = {1.0, -1.0};
  net.input_std = {2.0, 4.0};
  const std::vector<double> raw = {5.0, 1.0};
  const std::vector<double> standardized = {2.0, 0.5};
  EXPECT_DOUBLE_EQ(net.PredictRow(raw), TinyNet().PredictRow(standardized));
}

TEST(MlpNetTest, FlattenRoundTrip) {
  Rng rng(3);
  MlpNet net = cli::RandomMlp(rng, {3, 4, 2, 1});
  const std::vector<double> flat = net.FlattenParameters();
  EXPECT_EQ(flat.size(), net.num_parameters());
  EXPECT_EQ(flat.size(), 3u * 4 + 4 + 4 * 2 + 2 + 2 + 1);
  MlpNet copy = MlpNet::Initialize({3, 4, 2, 1}, 99);
  copy.SetParameters(flat);
  EXPECT_EQ(copy.FlattenParameters(), flat);
  const DenseMatrix x = cli::RandomMatrix(rng, 5, 3);
  EXPECT_EQ(copy.PredictBatch(x), net.PredictBatch(x));
}

TEST(MlpNetTest, InitializeIsSeededHeUniform) {
  const MlpNet a = MlpNet::Initialize({10, 20, 1}, 5);
  const MlpNet b = MlpNet::Initialize({10, 20, 1}, 5);
  const MlpNet c = MlpNet::Initialize({10, 20, 1}, 6);
  EXPECT_EQ(a.FlattenParameters(), b.FlattenParameters());
  EXPECT_NE(a.FlattenParameters(), c.FlattenParameters());
  const double limit = std::sqrt(6.0 / 10.0);
  EXPECT_LE(a.weights[0].cwiseAbs().maxCoeff(), limit);
  EXPECT_OK(a.Validate());
}

// Backprop against a central difference computed here from the loss alone.
TEST(GradientTest, MatchesIndependentFiniteDifference) {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    MlpNet net = cli::RandomMlp(rng, {3, 5, 4, 1});
    const DenseMatrix x = cli::RandomMatrix(rng, 6, 3);
    std::vector<double> y(6);
    for (double& v : y) v = rng.Normal();
    const std::vector<double> analytic = LossGradient(net, x, y);
    const std::vector<double> theta = net.FlattenParameters();
    ASSERT_EQ(analytic.size(), theta.size());
    const double eps = 1e-6;
    for (size_t p = 0; p < theta.size(); ++p) {
      std::vector<double> plus = theta, minus = theta;
      plus[p] += eps;
      minus[p] -= eps;
      MlpNet a = net, b = net;
      a.SetParameters(plus);
      b.SetParameters(minus);
      const double numeric =
          (MeanSquaredError(a, x, y) - MeanSquaredError(b, x, y)) / (2 * eps);
      EXPECT_NEAR(analytic[p], numeric, 1e-6 * std::max(1.0, std::abs(numeric)))
          << "param " << p;
    }
  }
}

TEST(GradientTest, GradCheckBelowTolerance) {
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const MlpNet net = cli::RandomMlp(rng, {4, 8, 1});
    const DenseMatrix x = cli::RandomMatrix(rng, 10, 4);
    std::vector<double> y(10);
    for (double& v : y) v = rng.Normal();
    const auto err = GradCheck(net, x, y, 1e-5);
    ASSERT_OK(err);
    EXPECT_LT(*err, 1e-4);
  }
}

TEST(GradientTest, GradCheckPreconditions) {
  Rng rng(9);
  const MlpNet net = cli::RandomMlp(rng, {2, 3, 1});
  const DenseMatrix big = cli::RandomMatrix(rng, 33, 2);
  const std::vector<double> y33(33, 0.0);
  EXPECT_FALSE(GradCheck(net, big, y33, 1e-5).ok());
  const DenseMatrix x = cli::RandomMatrix(rng, 4, 2);
  const std::vector<double> y(4, 0.0);
  EXPECT_FALSE(GradCheck(net, x, y, 1e-2).ok());
  EXPECT_FALSE(GradCheck(net, x, y, 1e-9).ok());
}

struct Linear {
  DenseMatrix x;
  std::vector<double> y;
};

Linear LinearData(uint64_t seed, size_t n) {
  Rng rng(seed);
  Linear d{cli::RandomMatrix(rng, n, 3), std::vector<double>(n)};
  for (size_t r = 0; r < n; ++r) {
    d.y[r] = 3 * d.x(r, 0) + d.x(r, 1) + 0.1 * rng.Normal() + 5.0;
  }
  return d;
}

TEST(FitMlpTest, LearnsLinearTarget) {
  const Linear d = LinearData(10, 500);
  MlpParams p;
  p.hidden_sizes = {32};
  p.seed = 4;
  const auto fit = FitMlp(d.x, d.y, p);
  ASSERT_OK(fit);
  EXPECT_GT(fit->report.validation_r2, 0.95);
  EXPECT_LT(fit->report.final_train_mse, fit->report.initial_train_mse);
  EXPECT_EQ(fit->report.validation_rows, 100u);
  EXPECT_EQ(fit->report.train_rows, 400u);
  EXPECT_GE(fit->report.epochs_run, fit->report.best_epoch);
}

TEST(FitMlpTest, DeterministicForSeed) {
  const Linear d = LinearData(11, 200);
  MlpParams p;
  p.hidden_sizes = {8};
  p.max_epochs = 15;
  p.seed = 1;
  const auto a = FitMlp(d.x, d.y, p);
  const auto b = FitMlp(d.x, d.y, p);
  ASSERT_OK(a);
  ASSERT_OK(b);
  EXPECT_EQ(a->net.FlattenParameters(), b->net.FlattenParameters());
  p.seed = 2;
  const auto c = FitMlp(d.x, d.y, p);
  ASSERT_OK(c);
  EXPECT_NE(a->net.FlattenParameters(), c->net.FlattenParameters());
}

TEST(FitMlpTest, ConstantFeatureGetsUnitScale) {
  Linear d = LinearData(12, 100);
  for (size_t r = 0; r < 100; ++r) d.x(r, 2) = 7.0;
  MlpParams p;
  p.hidden_sizes = {4};
  p.max_epochs = 2;
  const auto fit = FitMlp(d.x, d.y, p);
  ASSERT_OK(fit);
  EXPECT_EQ(fit->net.input_std[2], 1.0);
  EXPECT_EQ(fit->net.input_mean[2], 7.0);
}

TEST(FitMlpTest, ParamValidation) {
  const Linear d = LinearData(13, 50);
  MlpParams p;
  p.validation_fraction = 0.6;
  EXPECT_FALSE(FitMlp(d.x, d.y, p).ok());
  p = MlpParams{};
  p.batch_size = 0;
  EXPECT_FALSE(FitMlp(d.x, d.y, p).ok());
  p = MlpParams{};
  p.hidden_sizes = {0};
  EXPECT_FALSE(FitMlp(d.x, d.y, p).ok());
  EXPECT_FALSE(PredictMlp(MlpNet::Initialize({3, 2, 1}, 0), DenseMatrix(1, 2)).ok());
}

TEST(MlpIoTest, RoundTripIsExact) {
  const Linear d = LinearData(14, 120);
  MlpParams p;
  p.hidden_sizes = {6, 5};
  p.max_epochs = 5;
  const auto fit = FitMlp(d.x, d.y, p);
  ASSERT_OK(fit);
  const auto back = ParseMlpNet(SerializeMlpNet(fit->net));
  ASSERT_OK(back);
  EXPECT_EQ(back->FlattenParameters(), fit->net.FlattenParameters());
  EXPECT_EQ(back->input_mean, fit->net.input_mean);
  EXPECT_EQ(back->input_std, fit->net.input_std);
  EXPECT_EQ(back->feature_names, fit->net.feature_names);
  EXPECT_EQ(back->PredictBatch(d.x), fit->net.PredictBatch(d.x));
}

TEST(MlpIoTest, RejectsMalformedDocuments) {
  const std::string good = SerializeMlpNet(TinyNet());
  EXPECT_OK(ParseMlpNet(good));
  EXPECT_FALSE(ParseMlpNet("{}").ok());
  std::string extra = good;
  extra.insert(1, R"("surprise":1,)");
  EXPECT_FALSE(ParseMlpNet(extra).ok());
  std::string wrong_activation = good;
  const size_t pos = wrong_activation.find("relu");
  ASSERT_NE(pos, std::string::npos);
  wrong_activation.replace(pos, 4, "tanh");
  EXPECT_FALSE(ParseMlpNet(wrong_activation).ok());
}

}  // namespace
}  // namespace regime_xai::mlp
