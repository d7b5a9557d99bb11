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

#include "finimg/nnet/spec.hpp"

#include <cmath>
#include <sstream>

#include "finimg/error.hpp"
#include "finimg/nnet/layers.hpp"

namespace finimg::nnet {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string_view activation_name(ActivationKind k) {
  switch (k) {
    case ActivationKind::relu: return "relu";
    case ActivationKind::linear: return "linear";
    case ActivationKind::tanh: return "tanh";
    case ActivationKind::sigmoid: return "sigmoid";
  }
  return "?";
}

// A 2x pool is kept only if every pooled extent still admits what follows:
// `needed` is the next convolution's kernel, or 1 when nothing follows.
bool pool_fits(std::span<const std::size_t> extents, std::size_t needed) {
  for (const auto e : extents)
    if (e / 2 < needed) return false;
  return true;
}

void add_dense_head(NetworkSpec& spec) {
  spec.layers.emplace_back(FlattenSpec{});
  spec.layers.emplace_back(DenseSpec{128});
  spec.layers.emplace_back(ActivationSpec{ActivationKind::relu});
  spec.layers.emplace_back(DenseSpec{128});
  spec.layers.emplace_back(ActivationSpec{ActivationKind::relu});
  spec.layers.emplace_back(SoftmaxOutputSpec{kRatingOutputs});
}

}  // namespace

std::string describe(const LayerSpec& layer) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const DenseSpec& s) { os << "dense(" << s.units << ")"; },
                 [&](const Conv1DSpec& s) {
                   os << "conv1d(" << s.filters << ", " << s.kernel << (s.same_padding ? ", same" : "")
                      << ")";
                 },
                 [&](const Conv2DSpec& s) {
                   os << "conv2d(" << s.filters << ", " << s.kernel_h << "x" << s.kernel_w
                      << (s.same_padding ? ", same" : "") << ")";
                 },
                 [&](const MaxPoolSpec& s) { os << "maxpool(" << s.window << ")"; },
                 [&](const DropoutSpec& s) { os << "dropout(" << s.rate << ")"; },
                 [&](const ActivationSpec& s) { os << activation_name(s.kind); },
                 [&](const FlattenSpec&) { os << "flatten"; },
                 [&](const SoftmaxOutputSpec& s) { os << "softmax(" << s.classes << ")"; },
             },
             layer);
  return os.str();
}

std::vector<Shape> NetworkSpec::layer_shapes() const {
  if (input_shape.empty() || element_count(input_shape) == 0)
    fail(Errc::shape_mismatch, "network input shape " + shape_string(input_shape) + " is empty");
  std::vector<Shape> shapes;
  shapes.reserve(layers.size());
  Shape current = input_shape;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    current = layer_output_shape(layers[i], current, i);
    shapes.push_back(current);
  }
  return shapes;
}

Shape NetworkSpec::output_shape() const {
  const auto shapes = layer_shapes();
  return shapes.empty() ? input_shape : shapes.back();
}

std::size_t NetworkSpec::parameter_count() const {
  std::size_t total = 0;
  Shape current = input_shape;
  const auto shapes = layer_shapes();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto in = element_count(current);
    std::visit(Overloaded{
                   [&](const DenseSpec& s) { total += in * s.units + s.units; },
                   [&](const SoftmaxOutputSpec& s) { total += in * s.classes + s.classes; },
                   [&](const Conv1DSpec& s) {
                     total += s.filters * (current[0] * s.kernel) + s.filters;
                   },
                   [&](const Conv2DSpec& s) {
                     total += s.filters * (current[0] * s.kernel_h * s.kernel_w) + s.filters;
                   },
                   [&](const auto&) {},
               },
               layers[i]);
    current = shapes[i];
  }
  return total;
}

bool NetworkSpec::is_classifier() const {
  return !layers.empty() && std::holds_alternative<SoftmaxOutputSpec>(layers.back());
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    fail(Errc::invalid_argument, "learning rate must be a finite non-negative number");
  if (epochs < 0) fail(Errc::invalid_argument, "epochs must be non-negative");
  if (batch_size < 1) fail(Errc::invalid_argument, "batch size must be positive");
}

NetworkSpec build_mlp(int input_dim, int hidden1, int hidden2, double dropout) {
  if (input_dim < 1) fail(Errc::input_too_small, "MLP input dimension must be at least 1");
  NetworkSpec spec;
  spec.input_shape = {static_cast<std::size_t>(input_dim)};
  for (const int width : {hidden1, hidden2}) {
    spec.layers.emplace_back(DenseSpec{width});
    spec.layers.emplace_back(ActivationSpec{ActivationKind::relu});
    spec.layers.emplace_back(DropoutSpec{dropout});
  }
  spec.layers.emplace_back(SoftmaxOutputSpec{kRatingOutputs});
  return spec;
}

NetworkSpec build_cnn1d(int input_len, int filters1, int filters2) {
  if (input_len < 7)
    fail(Errc::input_too_small, "1D CNN input length " + std::to_string(input_len) + " is below 7");
  NetworkSpec spec;
  spec.input_shape = {1, static_cast<std::size_t>(input_len)};
  std::size_t len = static_cast<std::size_t>(input_len);

  spec.layers.emplace_back(Conv1DSpec{filters1, 3});
  spec.layers.emplace_back(ActivationSpec{ActivationKind::relu});
  len -= 2;
  if (const std::size_t e[] = {len}; pool_fits(e, 3)) {
    spec.layers.emplace_back(MaxPoolSpec{2});
    len /= 2;
  }
  spec.layers.emplace_back(Conv1DSpec{filters2, 3});
  spec.layers.emplace_back(ActivationSpec{ActivationKind::relu});
  len -= 2;
  if (const std::size_t e[] = {len}; pool_fits(e, 1)) spec.layers.emplace_back(MaxPoolSpec{2});
  add_dense_head(spec);
  return spec;
}

NetworkSpec build_cnn2d(int rows, int cols, int filters1, int filters2) {
  if (rows < 7 || cols < 7)
    fail(Errc::input_too_small, "2D CNN input " + std::to_string(rows) + "x" +
                                    std::to_string(cols) + " is below 7x7");
  NetworkSpec spec;
  spec.input_shape = {1, static_cast<std::size_t>(rows), static_cast<std::size_t>(cols)};
  std::size_t h = static_cast<std::size_t>(rows);
  std::size_t w = static_cast<std::size_t>(cols);

  spec.layers.emplace_back(Conv2DSpec{filters1, 3, 3});
  spec.layers.emplace_back(ActivationSpec{ActivationKind::relu});
  h -= 2;
  w -= 2;
  if (const std::size_t e[] = {h, w}; pool_fits(e, 3)) {
    spec.layers.emplace_back(MaxPoolSpec{2});
    h /= 2;
    w /= 2;
  }
  spec.layers.emplace_back(Conv2DSpec{filters2, 3, 3});
  spec.layers.emplace_back(ActivationSpec{ActivationKind::relu});
  h -= 2;
  w -= 2;
  if (const std::size_t e[] = {h, w}; pool_fits(e, 1)) spec.layers.emplace_back(MaxPoolSpec{2});
  add_dense_head(spec);
  return spec;
}

NetworkSpec build_autoencoder(int input_dim, int code_dim, int hidden) {
  if (code_dim < 1 || code_dim > input_dim)
    fail(Errc::invalid_argument, "auto-encoder code dimension must be in 1.." +
                                     std::to_string(input_dim));
  NetworkSpec spec;
  spec.input_shape = {static_cast<std::size_t>(input_dim)};
  spec.layers.emplace_back(DenseSpec{hidden});
  spec.layers.emplace_back(ActivationSpec{ActivationKind::relu});
  spec.layers.emplace_back(DenseSpec{code_dim});
  spec.layers.emplace_back(DenseSpec{hidden});
  spec.layers.emplace_back(ActivationSpec{ActivationKind::relu});
  spec.layers.emplace_back(DenseSpec{input_dim});
  return spec;
}

}  // namespace finimg::nnet
