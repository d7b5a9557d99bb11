// Copyright 2026 The finimg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finimg/nnet/network.hpp"
#include "finimg/nnet/spec.hpp"
#include "finimg/nnet/tensor.hpp"

namespace finimg::nnet {

// Samples stacked along axis 0. Classifiers use `labels`; regression
// networks (the auto-encoder) use `targets`.
struct TrainingData {
  Tensor inputs;
  std::vector<int> labels;
  Tensor targets;

  std::size_t size() const { return inputs.rank() ? inputs.dim(0) : 0; }
};

struct TrainedNetwork {
  Network network;
  std::vector<double> history;  // mean training loss per epoch
  std::uint64_t seed = 0;
};

class OptimizerState {
 public:
  OptimizerState(const TrainConfig& config, const std::vector<Tensor*>& params);
  void step(const std::vector<Tensor*>& params, const std::vector<Tensor>& grads);

 private:
  Optimizer kind_;
  double lr_;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long long t_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

// One optimizer update on the mean loss of `batch`; returns that loss.
// Throws divergence when the loss or any gradient is non-finite.
double backward_and_step(Network& net, OptimizerState& optimizer, const Tensor& batch,
                         const Targets& targets, Rng& dropout_rng, Workspace& ws,
                         std::vector<Tensor>& grads);

// Mini-batch training with per-epoch reshuffling. All randomness (weight
// init, shuffling, dropout masks) derives from config.seed.
TrainedNetwork train(const NetworkSpec& spec, const TrainingData& data, const TrainConfig& config);
// Continues from given weights instead of a fresh initialization.
TrainedNetwork train(Network initial, const TrainingData& data, const TrainConfig& config);

// Class probabilities for one sample (input shape without batch axis).
std::vector<double> predict(const Network& net, const Tensor& sample);
// (N, classes) probabilities, evaluated in chunks.
Tensor predict_batch(const Network& net, const Tensor& inputs, std::size_t chunk = 256);
std::vector<int> predict_classes(const Network& net, const Tensor& inputs);
double accuracy_on(const Network& net, const Tensor& inputs, std::span<const int> labels);

struct GradientCheckResult {
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
  std::size_t checked = 0;
};

// Central finite differences against backprop for every parameter and input
// element. Relative error is |a - n| / max(|a| + |n|, 1e-6). In train mode
// the dropout mask is frozen by reseeding with `dropout_seed` per evaluation.
GradientCheckResult gradient_check(const Network& net, const Tensor& sample, const Targets& target,
                                   double epsilon = 1e-5, Mode mode = Mode::infer,
                                   std::uint64_t dropout_seed = 0);

struct GridSearchRow {
  int neurons1 = 0;
  int neurons2 = 0;
  std::size_t parameters = 0;
  double train_accuracy = 0.0;
  double validation_accuracy = 0.0;
  std::optional<std::string> error;
};

struct GridSearchResult {
  std::vector<GridSearchRow> rows;
  std::optional<std::size_t> best;  // index into rows
};

using SpecBuilder = std::function<NetworkSpec(int neurons1, int neurons2)>;

// One model per (n1, n2) in grid x grid, row-major over the grid. Best is the
// highest validation accuracy, ties going to the smaller parameter count.
// Training failures are recorded on their row.
GridSearchResult grid_search(const SpecBuilder& builder, std::span<const int> neuron_grid,
                             const TrainingData& train_data, const TrainingData& validation,
                             const TrainConfig& config);

}  // namespace finimg::nnet
