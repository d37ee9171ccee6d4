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

#ifndef REGIME_XAI_MLP_MLP_H_
#define REGIME_XAI_MLP_MLP_H_

#include <cstdint>
#include <span>
#include <string>

#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "regime_xai/timeseries/feature_matrix.h"
#include "regime_xai/utils/dense_matrix.h"

namespace regime_xai::mlp {

// Fully-connected regressor: standardize inputs, then affine + ReLU for every
// hidden layer and a single affine output unit.
struct MlpNet {
  // input, hidden..., 1
  std::vector<int> layer_sizes;
  // weights[l] is (layer_sizes[l+1] x layer_sizes[l]); biases[l] matches rows.
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  // Standardization fitted on training rows. Constant features get std 1.
  std::vector<double> input_mean;
  std::vector<double> input_std;
  std::vector<std::string> feature_names;

  // He-uniform weights scaled by fan-in, zero biases, identity standardization.
  static MlpNet Initialize(std::vector<int> layer_sizes, uint64_t seed);

  absl::Status Validate() const;

  size_t num_inputs() const { return static_cast<size_t>(layer_sizes.front()); }
  size_t num_parameters() const;

  // Unchecked batch forward pass (x.cols() must equal num_inputs()).
  std::vector<double> PredictBatch(const DenseMatrix& x) const;
  double PredictRow(std::span<const double> row) const;

  // Weights (column-major per layer) then biases, layer by layer.
  std::vector<double> FlattenParameters() const;
  void SetParameters(std::span<const double> flat);
};

struct MlpParams {
  std::vector<int> hidden_sizes = {64, 64};
  int max_epochs = 300;
  int batch_size = 64;
  double step_size = 1e-3;
  int early_stop_patience = 20;
  double validation_fraction = 0.2;
  uint64_t seed = 0;

  absl::Status Validate() const;
};

struct MlpTrainingReport {
  int epochs_run = 0;
  // Epoch whose parameters were kept (0 = initialization).
  int best_epoch = 0;
  double initial_train_mse = 0.0;
  double final_train_mse = 0.0;
  double best_validation_mse = 0.0;
  double validation_r2 = 0.0;
  size_t train_rows = 0;
  size_t validation_rows = 0;
};

struct MlpFit {
  MlpNet net;
  MlpTrainingReport report;
};

// Minimizes mean squared error with mini-batch Adam. The last
// validation_fraction of rows (time order) is held out for early stopping and
// the parameters with the best validation loss are returned.
absl::StatusOr<MlpFit> FitMlp(const DenseMatrix& x, std::span<const double> y,
                              const MlpParams& params,
                              std::vector<std::string> feature_names = {});
absl::StatusOr<MlpFit> FitMlp(const timeseries::FeatureMatrix& train,
                              const MlpParams& params);

absl::StatusOr<std::vector<double>> PredictMlp(const MlpNet& net,
                                               const DenseMatrix& x);

double MeanSquaredError(const MlpNet& net, const DenseMatrix& x,
                        std::span<const double> y);

// Analytic gradient of the mean squared error w.r.t. FlattenParameters().
std::vector<double> LossGradient(const MlpNet& net, const DenseMatrix& x,
                                 std::span<const double> y);

// Max over all parameters of |a - n| / max(|a|, |n|, 1e-8), comparing the
// backpropagated gradient a with a central finite difference n.
// Requires x.rows() <= 32 and epsilon in [1e-7, 1e-4].
absl::StatusOr<double> GradCheck(const MlpNet& net, const DenseMatrix& x,
                                 std::span<const double> y, double epsilon);

std::string SerializeMlpNet(const MlpNet& net);
absl::StatusOr<MlpNet> ParseMlpNet(absl::string_view json);

}  // namespace regime_xai::mlp

#endif  // REGIME_XAI_MLP_MLP_H_
