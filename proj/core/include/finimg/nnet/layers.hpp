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

#include "finimg/nnet/spec.hpp"
#include "finimg/nnet/tensor.hpp"
#include "finimg/rng.hpp"

namespace finimg::nnet {

enum class Mode { train, infer };

// Per-call scratch owned by the caller, so layers stay const during forward
// and backward passes and one trained network can serve concurrent callers.
struct LayerCache {
  Buffer buffer;
  Buffer scratch;
  Buffer scratch2;
  std::vector<std::uint32_t> index;
};

class Layer {
 public:
  virtual ~Layer() = default;

  virtual std::unique_ptr<Layer> clone() const = 0;
  virtual LayerSpec spec() const = 0;

  const Shape& input_shape() const noexcept { return input_shape_; }
  const Shape& output_shape() const noexcept { return output_shape_; }

  std::span<Tensor> parameters() noexcept { return params_; }
  std::span<const Tensor> parameters() const noexcept { return params_; }

  virtual void initialize(Rng& rng);

  // `in` is (N, input_shape...); `out` is resized to (N, output_shape...).
  virtual void forward(const Tensor& in, Tensor& out, Mode mode, LayerCache& cache,
                       Rng* rng) const = 0;
  // Accumulates parameter gradients into `grads` (one per parameter) and, if
  // `din` is non-null, writes the input gradient.
  virtual void backward(const Tensor& in, const Tensor& out, const Tensor& dout, Tensor* din,
                        LayerCache& cache, std::span<Tensor> grads) const = 0;

 protected:
  Layer(Shape input, Shape output) : input_shape_(std::move(input)), output_shape_(std::move(output)) {}
  Layer(const Layer&) = default;

  std::size_t batch_of(const Tensor& in) const;

  Shape input_shape_;
  Shape output_shape_;
  std::vector<Tensor> params_;
};

// Validates the input shape against the layer kind.
std::unique_ptr<Layer> make_layer(const LayerSpec& spec, const Shape& input_shape,
                                  std::size_t position);
Shape layer_output_shape(const LayerSpec& spec, const Shape& input_shape, std::size_t position);

}  // namespace finimg::nnet
