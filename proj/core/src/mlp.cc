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

#include "regime_xai/mlp/mlp.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"
#include "regime_xai/utils/random.h"
#include "regime_xai/utils/status_macros.h"

namespace regime_xai::mlp {
namespace {

using RowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Inputs as (features x batch), standardized.
Eigen::MatrixXd StandardizedInputs(const MlpNet& net, const DenseMatrix& x) {
  Eigen::Map<const RowMajor> raw(x.values().data(),
                                 static_cast<Eigen::Index>(x.rows()),
                                 static_cast<Eigen::Index>(x.cols()));
  Eigen::MatrixXd a = raw.transpose();
  for (Eigen::Index f = 0; f < a.rows(); ++f) {
    a.row(f).array() = (a.row(f).array() - net.input_mean[f]) / net.input_std[f];
  }
  return a;
}

// Pre-activations per layer for backprop; returns output row.
struct ForwardTrace {
  std::vector<Eigen::MatrixXd> activations;  // a[0] = input, a[l+1] = out of l
  std::vector<Eigen::MatrixXd> pre;          // z[l]
};

ForwardTrace Forward(const MlpNet& net, Eigen::MatrixXd input) {
  ForwardTrace trace;
  const size_t n_layers = net.weights.size();
  trace.activations.reserve(n_layers + 1);
  trace.pre.reserve(n_layers);
  trace.activations.push_back(std::move(input));
  for (size_t l = 0; l < n_layers; ++l) {
    Eigen::MatrixXd z = net.weights[l] * trace.activations.back();
    z.colwise() += net.biases[l];
    if (l + 1 < n_layers) {
      trace.activations.push_back(z.cwiseMax(0.0));
    } else {
      trace.activations.push_back(z);
    }
    trace.pre.push_back(std::move(z));
  }
  return trace;
}

Eigen::RowVectorXd ForwardOutput(const MlpNet& net, const Eigen::MatrixXd& input) {
  Eigen::MatrixXd a = input;
  const size_t n_layers = net.weights.size();
  for (size_t l = 0; l < n_layers; ++l) {
    Eigen::MatrixXd z = net.weights[l] * a;
    z.colwise() += net.biases[l];
    a = (l + 1 < n_layers) ? Eigen::MatrixXd(z.cwiseMax(0.0)) : std::move(z);
  }
  return a.row(0);
}

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

// Gradient of mean((pred - y)^2) over the batch columns of `input`.
Gradients Backward(const MlpNet& net, const Eigen::MatrixXd& input,
                   const Eigen::RowVectorXd& y) {
  ForwardTrace trace = Forward(net, input);
  const size_t n_layers = net.weights.size();
  const double batch = static_cast<double>(input.cols());
  Gradients g;
  g.weights.resize(n_layers);
  g.biases.resize(n_layers);
  Eigen::MatrixXd delta = 2.0 * (trace.activations.back() - y) / batch;
  for (size_t l = n_layers; l-- > 0;) {
    g.weights[l] = delta * trace.activations[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = net.weights[l].transpose() * delta;
      delta = back.cwiseProduct(
          (trace.pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return g;
}

double Mse(const Eigen::RowVectorXd& pred, std::span<const double> y) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - y[static_cast<size_t>(i)];
    sum += d * d;
  }
  return sum / static_cast<double>(pred.size());
}

Eigen::RowVectorXd ToRow(std::span<const double> y) {
  Eigen::RowVectorXd r(static_cast<Eigen::Index>(y.size()));
  for (size_t i = 0; i < y.size(); ++i) r[static_cast<Eigen::Index>(i)] = y[i];
  return r;
}

}  // namespace

MlpNet MlpNet::Initialize(std::vector<int> layer_sizes, uint64_t seed) {
  MlpNet net;
  net.layer_sizes = std::move(layer_sizes);
  Rng rng(seed);
  for (size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
    const int fan_in = net.layer_sizes[l];
    const int fan_out = net.layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / fan_in);
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) w(r, c) = rng.Uniform(-limit, limit);
    }
    net.weights.push_back(std::move(w));
    net.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  const size_t n_in = static_cast<size_t>(net.layer_sizes.front());
  net.input_mean.assign(n_in, 0.0);
  net.input_std.assign(n_in, 1.0);
  for (size_t f = 0; f < n_in; ++f) net.feature_names.push_back(absl::StrCat("f", f));
  return net;
}

absl::Status MlpNet::Validate() const {
  if (layer_sizes.size() < 2 || layer_sizes.back() != 1) {
    return absl::InvalidArgumentError(
        "MlpNet needs >= 2 layers and a single output unit");
  }
  for (int s : layer_sizes) {
    if (s < 1) return absl::InvalidArgumentError("Layer sizes must be >= 1");
  }
  if (weights.size() != layer_sizes.size() - 1 ||
      biases.size() != weights.size()) {
    return absl::InvalidArgumentError("MlpNet layer count mismatch");
  }
  for (size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].rows() != layer_sizes[l + 1] ||
        weights[l].cols() != layer_sizes[l] ||
        biases[l].size() != layer_sizes[l + 1]) {
      return absl::InvalidArgumentError(
          absl::StrCat("MlpNet layer ", l, " has inconsistent shapes"));
    }
    if (!weights[l].allFinite() || !biases[l].allFinite()) {
      return absl::InvalidArgumentError(
          absl::StrCat("MlpNet layer ", l, " has non-finite parameters"));
    }
  }
  const size_t n_in = num_inputs();
  if (input_mean.size() != n_in || input_std.size() != n_in ||
      feature_names.size() != n_in) {
    return absl::InvalidArgumentError("MlpNet standardization size mismatch");
  }
  for (size_t f = 0; f < n_in; ++f) {
    if (!std::isfinite(input_mean[f]) || !(input_std[f] > 0.0) ||
        !std::isfinite(input_std[f])) {
      return absl::InvalidArgumentError(
          absl::StrCat("MlpNet input ", f, " has invalid standardization"));
    }
  }
  return absl::OkStatus();
}

size_t MlpNet::num_parameters() const {
  size_t n = 0;
  for (size_t l = 0; l < weights.size(); ++l) {
    n += static_cast<size_t>(weights[l].size() + biases[l].size());
  }
  return n;
}

std::vector<double> MlpNet::PredictBatch(const DenseMatrix& x) const {
  if (x.rows() == 0) return {};
  const Eigen::RowVectorXd out = ForwardOutput(*this, StandardizedInputs(*this, x));
  return std::vector<double>(out.data(), out.data() + out.size());
}

double MlpNet::PredictRow(std::span<const double> row) const {
  DenseMatrix x(0, row.size());
  x.AppendRow(row);
  return PredictBatch(x).front();
}

std::vector<double> MlpNet::FlattenParameters() const {
  std::vector<double> flat;
  flat.reserve(num_parameters());
  for (size_t l = 0; l < weights.size(); ++l) {
    flat.insert(flat.end(), weights[l].data(),
                weights[l].data() + weights[l].size());
    flat.insert(flat.end(), biases[l].data(), biases[l].data() + biases[l].size());
  }
  return flat;
}

void MlpNet::SetParameters(std::span<const double> flat) {
  size_t pos = 0;
  for (size_t l = 0; l < weights.size(); ++l) {
    std::copy_n(flat.begin() + pos, weights[l].size(), weights[l].data());
    pos += static_cast<size_t>(weights[l].size());
    std::copy_n(flat.begin() + pos, biases[l].size(), biases[l].data());
    pos += static_cast<size_t>(biases[l].size());
  }
}

absl::Status MlpParams::Validate() const {
  if (hidden_sizes.empty()) {
    return absl::InvalidArgumentError("hidden_sizes must not be empty");
  }
  for (int h : hidden_sizes) {
    if (h < 1) return absl::InvalidArgumentError("hidden sizes must be >= 1");
  }
  if (max_epochs < 1 || batch_size < 1 || early_stop_patience < 1) {
    return absl::InvalidArgumentError(
        "max_epochs, batch_size and early_stop_patience must be >= 1");
  }
  if (!(step_size > 0.0)) {
    return absl::InvalidArgumentError("step_size must be > 0");
  }
  if (!(validation_fraction > 0.0 && validation_fraction <= 0.5)) {
    return absl::InvalidArgumentError("validation_fraction must be in (0, 0.5]");
  }
  return absl::OkStatus();
}

double MeanSquaredError(const MlpNet& net, const DenseMatrix& x,
                        std::span<const double> y) {
  if (x.rows() == 0) return 0.0;
  return Mse(ForwardOutput(net, StandardizedInputs(net, x)), y);
}

std::vector<double> LossGradient(const MlpNet& net, const DenseMatrix& x,
                                 std::span<const double> y) {
  const Gradients g = Backward(net, StandardizedInputs(net, x), ToRow(y));
  std::vector<double> flat;
  flat.reserve(net.num_parameters());
  for (size_t l = 0; l < g.weights.size(); ++l) {
    flat.insert(flat.end(), g.weights[l].data(),
                g.weights[l].data() + g.weights[l].size());
    flat.insert(flat.end(), g.biases[l].data(),
                g.biases[l].data() + g.biases[l].size());
  }
  return flat;
}

absl::StatusOr<double> GradCheck(const MlpNet& net, const DenseMatrix& x,
                                 std::span<const double> y, double epsilon) {
  RETURN_IF_ERROR(net.Validate());
  if (x.rows() == 0 || x.rows() > 32 || x.rows() != y.size() ||
      x.cols() != net.num_inputs()) {
    return absl::InvalidArgumentError(
        "GradCheck needs 1..32 rows matching the net's inputs and targets");
  }
  if (!(epsilon >= 1e-7 && epsilon <= 1e-4)) {
    return absl::InvalidArgumentError("GradCheck epsilon must be in [1e-7, 1e-4]");
  }
  const std::vector<double> analytic = LossGradient(net, x, y);
  MlpNet probe = net;
  std::vector<double> params = net.FlattenParameters();
  double max_rel = 0.0;
  for (size_t p = 0; p < params.size(); ++p) {
    const double saved = params[p];
    params[p] = saved + epsilon;
    probe.SetParameters(params);
    const double plus = MeanSquaredError(probe, x, y);
    params[p] = saved - epsilon;
    probe.SetParameters(params);
    const double minus = MeanSquaredError(probe, x, y);
    params[p] = saved;
    const double numeric = (plus - minus) / (2.0 * epsilon);
    const double a = analytic[p];
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
    max_rel = std::max(max_rel, std::abs(a - numeric) / denom);
  }
  return max_rel;
}

absl::StatusOr<MlpFit> FitMlp(const DenseMatrix& x, std::span<const double> y,
                              const MlpParams& params,
                              std::vector<std::string> feature_names) {
  RETURN_IF_ERROR(params.Validate());
  const size_t n = x.rows();
  if (n == 0) return absl::InvalidArgumentError("FitMlp: empty training set");
  if (y.size() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("FitMlp: ", n, " rows but ", y.size(), " targets"));
  }
  if (x.cols() == 0) return absl::InvalidArgumentError("FitMlp: no features");
  const auto& xv = x.values();
  if (std::any_of(xv.begin(), xv.end(), [](double v) { return !std::isfinite(v); }) ||
      std::any_of(y.begin(), y.end(), [](double v) { return !std::isfinite(v); })) {
    return absl::InvalidArgumentError("FitMlp: training data has missing cells");
  }
  if (feature_names.empty()) {
    for (size_t f = 0; f < x.cols(); ++f) feature_names.push_back(absl::StrCat("f", f));
  }
  if (feature_names.size() != x.cols()) {
    return absl::InvalidArgumentError("FitMlp: feature name count mismatch");
  }

  // Time-ordered tail is the validation slice.
  size_t n_val = static_cast<size_t>(
      std::floor(params.validation_fraction * static_cast<double>(n)));
  if (n >= 2) n_val = std::clamp<size_t>(n_val, 1, n - 1);
  else n_val = 0;
  const size_t n_train = n - n_val;

  std::vector<int> sizes = {static_cast<int>(x.cols())};
  sizes.insert(sizes.end(), params.hidden_sizes.begin(), params.hidden_sizes.end());
  sizes.push_back(1);
  MlpNet net = MlpNet::Initialize(sizes, DeriveSeed(params.seed, 0));
  net.feature_names = std::move(feature_names);

  for (size_t f = 0; f < x.cols(); ++f) {
    double mean = 0.0;
    for (size_t r = 0; r < n_train; ++r) mean += x(r, f);
    mean /= static_cast<double>(n_train);
    double var = 0.0;
    for (size_t r = 0; r < n_train; ++r) var += (x(r, f) - mean) * (x(r, f) - mean);
    var /= static_cast<double>(n_train);
    const double sd = std::sqrt(var);
    net.input_mean[f] = mean;
    net.input_std[f] = sd > 1e-12 ? sd : 1.0;
  }
  double y_mean = 0.0;
  for (size_t r = 0; r < n_train; ++r) y_mean += y[r];
  y_mean /= static_cast<double>(n_train);
  net.biases.back()[0] = y_mean;

  const Eigen::MatrixXd all_inputs = StandardizedInputs(net, x);
  const Eigen::MatrixXd train_in = all_inputs.leftCols(static_cast<Eigen::Index>(n_train));
  const std::span<const double> y_train = y.first(n_train);
  const Eigen::MatrixXd val_in =
      n_val > 0 ? Eigen::MatrixXd(all_inputs.rightCols(static_cast<Eigen::Index>(n_val)))
                : train_in;
  const std::span<const double> y_val = n_val > 0 ? y.subspan(n_train) : y_train;

  MlpTrainingReport report;
  report.train_rows = n_train;
  report.validation_rows = n_val;
  report.initial_train_mse = Mse(ForwardOutput(net, train_in), y_train);
  double best_val = Mse(ForwardOutput(net, val_in), y_val);
  MlpNet best = net;
  int since_best = 0;

  // Adam state, one slot per flattened parameter.
  std::vector<double> theta = net.FlattenParameters();
  std::vector<double> m1(theta.size(), 0.0), m2(theta.size(), 0.0);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;
  double beta1_t = 1.0, beta2_t = 1.0;

  Rng rng(DeriveSeed(params.seed, 1));
  std::vector<size_t> order(n_train);
  std::iota(order.begin(), order.end(), size_t{0});
  const size_t batch = static_cast<size_t>(params.batch_size);

  for (int epoch = 1; epoch <= params.max_epochs; ++epoch) {
    rng.Shuffle(std::span<size_t>(order));
    for (size_t start = 0; start < n_train; start += batch) {
      const size_t end = std::min(n_train, start + batch);
      const Eigen::Index b = static_cast<Eigen::Index>(end - start);
      Eigen::MatrixXd in(train_in.rows(), b);
      Eigen::RowVectorXd target(b);
      for (Eigen::Index i = 0; i < b; ++i) {
        const size_t r = order[start + static_cast<size_t>(i)];
        in.col(i) = train_in.col(static_cast<Eigen::Index>(r));
        target[i] = y_train[r];
      }
      const Gradients g = Backward(net, in, target);
      beta1_t *= kBeta1;
      beta2_t *= kBeta2;
      size_t p = 0;
      const auto update = [&](const double* grad, Eigen::Index count) {
        for (Eigen::Index k = 0; k < count; ++k, ++p) {
          m1[p] = kBeta1 * m1[p] + (1.0 - kBeta1) * grad[k];
          m2[p] = kBeta2 * m2[p] + (1.0 - kBeta2) * grad[k] * grad[k];
          const double m_hat = m1[p] / (1.0 - beta1_t);
          const double v_hat = m2[p] / (1.0 - beta2_t);
          theta[p] -= params.step_size * m_hat / (std::sqrt(v_hat) + kAdamEps);
        }
      };
      for (size_t l = 0; l < g.weights.size(); ++l) {
        update(g.weights[l].data(), g.weights[l].size());
        update(g.biases[l].data(), g.biases[l].size());
      }
      net.SetParameters(theta);
    }
    report.epochs_run = epoch;

    const double train_mse = Mse(ForwardOutput(net, train_in), y_train);
    if (!std::isfinite(train_mse)) {
      return absl::InternalError(absl::StrCat(
          "FitMlp: training loss became non-finite at epoch ", epoch));
    }
    const double val_mse = Mse(ForwardOutput(net, val_in), y_val);
    if (val_mse < best_val) {
      best_val = val_mse;
      best = net;
      report.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= params.early_stop_patience) {
      break;
    }
  }

  report.best_validation_mse = best_val;
  report.final_train_mse = Mse(ForwardOutput(best, train_in), y_train);
  double val_mean = 0.0;
  for (double v : y_val) val_mean += v;
  val_mean /= static_cast<double>(y_val.size());
  double ss_tot = 0.0;
  for (double v : y_val) ss_tot += (v - val_mean) * (v - val_mean);
  ss_tot /= static_cast<double>(y_val.size());
  report.validation_r2 = ss_tot > 0.0 ? 1.0 - best_val / ss_tot
                                      : (best_val == 0.0 ? 1.0 : 0.0);
  return MlpFit{std::move(best), report};
}

absl::StatusOr<MlpFit> FitMlp(const timeseries::FeatureMatrix& train,
                              const MlpParams& params) {
  return FitMlp(train.x, train.y, params, train.feature_names);
}

absl::StatusOr<std::vector<double>> PredictMlp(const MlpNet& net,
                                               const DenseMatrix& x) {
  if (x.cols() != net.num_inputs()) {
    return absl::InvalidArgumentError(
        absl::StrCat("PredictMlp: input has ", x.cols(),
                     " columns, net expects ", net.num_inputs()));
  }
  return net.PredictBatch(x);
}

}  // namespace regime_xai::mlp
