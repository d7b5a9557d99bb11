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

#include "finimg/nnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finimg/error.hpp"

namespace finimg::nnet {

double cross_entropy(std::span<const double> probabilities, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= probabilities.size())
    fail(Errc::out_of_range, "label " + std::to_string(label) + " outside " +
                                 std::to_string(probabilities.size()) + " classes");
  return -std::log(std::max(probabilities[static_cast<std::size_t>(label)], kProbabilityFloor));
}

namespace {

// Mean batch loss of `out`; also the gradient w.r.t. `out` when requested.
double output_loss(bool classifier, const Tensor& out, const Targets& targets, Tensor* dout) {
  const std::size_t n = out.dim(0);
  const std::size_t width = out.size() / n;
  const double inv_n = 1.0 / static_cast<double>(n);
  if (dout) {
    dout->resize(out.shape());
    dout->fill(0.0);
  }
  double loss = 0.0;
  if (classifier) {
    if (targets.labels.size() != n)
      fail(Errc::shape_mismatch, std::to_string(targets.labels.size()) + " labels for a batch of " +
                                     std::to_string(n));
    for (std::size_t r = 0; r < n; ++r) {
      const int label = targets.labels[r];
      std::span<const double> row(out.data() + r * width, width);
      loss += cross_entropy(row, label);
      const double p = row[static_cast<std::size_t>(label)];
      if (dout && p > kProbabilityFloor) (*dout)[r * width + static_cast<std::size_t>(label)] = -inv_n / p;
    }
  } else {
    if (!targets.values || targets.values->shape() != out.shape())
      fail(Errc::shape_mismatch, "regression targets must match output shape " + shape_string(out.shape()));
    const double* t = targets.values->data();
    const double scale = inv_n / static_cast<double>(width);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double d = out[i] - t[i];
      loss += d * d / static_cast<double>(width);
      if (dout) (*dout)[i] = 2.0 * d * scale;
    }
  }
  return loss * inv_n;
}

}  // namespace

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
  Shape shape = spec_.input_shape;
  if (shape.empty() || element_count(shape) == 0)
    fail(Errc::shape_mismatch, "network input shape " + shape_string(shape) + " is empty");
  layers_.reserve(spec_.layers.size());
  for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
    layers_.push_back(make_layer(spec_.layers[i], shape, i));
    shape = layers_.back()->output_shape();
  }
}

Network::Network(const Network& other) : spec_(other.spec_) {
  layers_.reserve(other.layers_.size());
  for (const auto& l : other.layers_) layers_.push_back(l->clone());
}

Network& Network::operator=(const Network& other) {
  if (this != &other) {
    Network copy(other);
    *this = std::move(copy);
  }
  return *this;
}

void Network::initialize(std::uint64_t seed) {
  Rng rng(seed);
  for (auto& l : layers_) l->initialize(rng);
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto* p : parameters()) n += p->size();
  return n;
}

std::vector<Tensor*> Network::parameters() {
  std::vector<Tensor*> out;
  for (auto& l : layers_)
    for (auto& p : l->parameters()) out.push_back(&p);
  return out;
}

std::vector<const Tensor*> Network::parameters() const {
  std::vector<const Tensor*> out;
  for (const auto& l : layers_)
    for (const auto& p : l->parameters()) out.push_back(&p);
  return out;
}

void Network::check_batch(const Tensor& batch) const {
  const auto& s = batch.shape();
  const auto& in = spec_.input_shape;
  if (layers_.empty()) fail(Errc::invalid_argument, "network has no layers");
  if (s.size() != in.size() + 1 || !std::equal(in.begin(), in.end(), s.begin() + 1))
    fail(Errc::shape_mismatch, "network expects batches of " + shape_string(in) + " but got " +
                                   shape_string(s));
  if (s[0] == 0) fail(Errc::invalid_argument, "empty batch");
}

Tensor Network::forward(const Tensor& batch, Mode mode, Rng* rng) const {
  check_batch(batch);
  Tensor cur = batch;
  Tensor next;
  LayerCache cache;
  for (const auto& l : layers_) {
    l->forward(cur, next, mode, cache, rng);
    std::swap(cur, next);
  }
  return cur;
}

Tensor Network::forward_prefix(const Tensor& batch, std::size_t layers) const {
  check_batch(batch);
  if (layers > layers_.size())
    fail(Errc::out_of_range, "network has only " + std::to_string(layers_.size()) + " layers");
  Tensor cur = batch;
  Tensor next;
  LayerCache cache;
  for (std::size_t i = 0; i < layers; ++i) {
    layers_[i]->forward(cur, next, Mode::infer, cache, nullptr);
    std::swap(cur, next);
  }
  return cur;
}

double Network::loss_and_gradients(const Tensor& batch, const Targets& targets, Mode mode, Rng* rng,
                                   Workspace& ws, std::vector<Tensor>& param_grads,
                                   Tensor* input_grad) const {
  check_batch(batch);
  const std::size_t count = layers_.size();
  ws.activations.resize(count);
  ws.deltas.resize(count);
  ws.caches.resize(count);

  for (std::size_t i = 0; i < count; ++i) {
    const Tensor& in = i == 0 ? batch : ws.activations[i - 1];
    layers_[i]->forward(in, ws.activations[i], mode, ws.caches[i], rng);
  }

  Tensor& dout = ws.deltas.back();
  const double loss = output_loss(spec_.is_classifier(), ws.activations.back(), targets, &dout);

  std::size_t total = 0;
  for (const auto& l : layers_) total += l->parameters().size();
  param_grads.resize(total);
  std::size_t g = total;
  for (std::size_t i = count; i-- > 0;) {
    const auto params = layers_[i]->parameters();
    g -= params.size();
    for (std::size_t k = 0; k < params.size(); ++k) {
      param_grads[g + k].resize(params[k].shape());
      param_grads[g + k].fill(0.0);
    }
    std::span<Tensor> grads(param_grads.data() + g, params.size());
    const Tensor& in = i == 0 ? batch : ws.activations[i - 1];
    Tensor* din = i == 0 ? input_grad : &ws.deltas[i - 1];
    layers_[i]->backward(in, ws.activations[i], ws.deltas[i], din, ws.caches[i], grads);
  }
  return loss;
}

double Network::loss(const Tensor& batch, const Targets& targets, Mode mode, Rng* rng) const {
  return output_loss(spec_.is_classifier(), forward(batch, mode, rng), targets, nullptr);
}

}  // namespace finimg::nnet
