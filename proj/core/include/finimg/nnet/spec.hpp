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
#include <string>
#include <variant>
#include <vector>

#include "finimg/nnet/tensor.hpp"

namespace finimg::nnet {

enum class ActivationKind { relu, linear, tanh, sigmoid };

struct DenseSpec {
  int units = 0;
  bool operator==(const DenseSpec&) const = default;
};
struct Conv1DSpec {
  int filters = 0;
  int kernel = 3;
  bool same_padding = false;
  bool operator==(const Conv1DSpec&) const = default;
};
struct Conv2DSpec {
  int filters = 0;
  int kernel_h = 3;
  int kernel_w = 3;
  bool same_padding = false;
  bool operator==(const Conv2DSpec&) const = default;
};
// Non-overlapping window; 1D on (C, L) inputs, window x window on (C, H, W).
struct MaxPoolSpec {
  int window = 2;
  bool operator==(const MaxPoolSpec&) const = default;
};
struct DropoutSpec {
  double rate = 0.0;
  bool operator==(const DropoutSpec&) const = default;
};
struct ActivationSpec {
  ActivationKind kind = ActivationKind::relu;
  bool operator==(const ActivationSpec&) const = default;
};
struct FlattenSpec {
  bool operator==(const FlattenSpec&) const = default;
};
// Dense projection to `classes` logits followed by softmax.
struct SoftmaxOutputSpec {
  int classes = 0;
  bool operator==(const SoftmaxOutputSpec&) const = default;
};

using LayerSpec = std::variant<DenseSpec, Conv1DSpec, Conv2DSpec, MaxPoolSpec, DropoutSpec,
                               ActivationSpec, FlattenSpec, SoftmaxOutputSpec>;

std::string describe(const LayerSpec& layer);

// Input shape excludes the batch axis: (D) for dense stacks, (C, L) for 1D
// convolutions, (C, H, W) for 2D convolutions.
struct NetworkSpec {
  Shape input_shape;
  std::vector<LayerSpec> layers;

  // Per-sample output shape of every layer; throws shape_mismatch naming the
  // first layer that cannot accept its input.
  std::vector<Shape> layer_shapes() const;
  Shape output_shape() const;
  std::size_t parameter_count() const;
  // True when the last layer is a softmax output (cross-entropy loss);
  // otherwise the network is trained on mean squared error.
  bool is_classifier() const;

  bool operator==(const NetworkSpec&) const = default;
};

enum class Optimizer { sgd, adam };

struct TrainConfig {
  double learning_rate = 1e-3;
  int epochs = 100;
  int batch_size = 32;
  std::uint64_t seed = 0;
  Optimizer optimizer = Optimizer::adam;

  void validate() const;
};

inline constexpr int kRatingOutputs = 12;

// dense(h1)+ReLU+dropout, dense(h2)+ReLU+dropout, softmax(12).
NetworkSpec build_mlp(int input_dim, int hidden1 = 128, int hidden2 = 128, double dropout = 0.3);
// conv1d(f1,3)+ReLU, pool, conv1d(f2,3)+ReLU, pool, flatten, 128, 128, softmax(12).
NetworkSpec build_cnn1d(int input_len, int filters1 = 64, int filters2 = 32);
// conv2d(f1,3x3)+ReLU, pool, conv2d(f2,3x3)+ReLU, pool, flatten, 128, 128, softmax(12).
NetworkSpec build_cnn2d(int rows, int cols, int filters1 = 64, int filters2 = 32);
// dense(hidden)+ReLU, dense(code) | dense(hidden)+ReLU, dense(input_dim).
NetworkSpec build_autoencoder(int input_dim, int code_dim, int hidden = 128);
// Number of leading layers that map an input to its code.
inline constexpr std::size_t kAutoencoderEncoderLayers = 3;

}  // namespace finimg::nnet
