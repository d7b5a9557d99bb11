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
#include <memory>
#include <span>
#include <vector>

#include "finimg/nnet/layers.hpp"
#include "finimg/nnet/spec.hpp"
#include "finimg/nnet/tensor.hpp"

namespace finimg::nnet {

// Supervision for one batch: class labels for classifiers, a target tensor
// shaped like the output for regression networks.
struct Targets {
  std::span<const int> labels;
  const Tensor* values = nullptr;
};

// Reusable activation/gradient storage for repeated passes.
struct Workspace {
  std::vector<Tensor> activations;
  std::vector<Tensor> deltas;
  std::vector<LayerCache> caches;
};

inline constexpr double kProbabilityFloor = 1e-12;

// -log(max(p[label], 1e-12)).
double cross_entropy(std::span<const double> probabilities, int label);

class Network {
 public:
  Network() = default;
  // Parameters are zero until initialize() or assignment.
  explicit Network(NetworkSpec spec);
  Network(const Network& other);
  Network& operator=(const Network& other);
  Network(Network&&) noexcept = default;
  Network& operator=(Network&&) noexcept = default;
  ~Network() = default;

  // Fan-in scaled uniform weights, zero biases.
  void initialize(std::uint64_t seed);

  const NetworkSpec& spec() const noexcept { return spec_; }
  std::size_t layer_count() const noexcept { return layers_.size(); }
  const Layer& layer(std::size_t i) const { return *layers_.at(i); }
  std::size_t parameter_count() const;

  std::vector<Tensor*> parameters();
  std::vector<const Tensor*> parameters() const;

  // Batch forward pass, (N, input...) -> (N, output...).
  Tensor forward(const Tensor& batch, Mode mode = Mode::infer, Rng* rng = nullptr) const;
  // Output of the first `layers` layers.
  Tensor forward_prefix(const Tensor& batch, std::size_t layers) const;

  // Mean batch loss; fills `param_grads` (resized to match parameters()) and,
  // when `input_grad` is non-null, the loss gradient w.r.t. the batch.
  double loss_and_gradients(const Tensor& batch, const Targets& targets, Mode mode, Rng* rng,
                            Workspace& ws, std::vector<Tensor>& param_grads,
                            Tensor* input_grad = nullptr) const;

  double loss(const Tensor& batch, const Targets& targets, Mode mode = Mode::infer,
              Rng* rng = nullptr) const;

 private:
  void check_batch(const Tensor& batch) const;

  NetworkSpec spec_;
  std::vector<std::unique_ptr<Layer>> layers_;
};

}  // namespace finimg::nnet
