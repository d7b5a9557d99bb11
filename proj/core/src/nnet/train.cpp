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

#include "finimg/nnet/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "finimg/error.hpp"

namespace finimg::nnet {

namespace {

Shape with_batch(std::size_t n, const Shape& s) {
  Shape out{n};
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

void check_data(const NetworkSpec& spec, const TrainingData& data) {
  const auto n = data.size();
  if (n == 0) fail(Errc::empty_set, "training data is empty");
  if (data.inputs.shape() != with_batch(n, spec.input_shape))
    fail(Errc::shape_mismatch, "training inputs " + shape_string(data.inputs.shape()) +
                                   " do not match network input " + shape_string(spec.input_shape));
  if (spec.is_classifier()) {
    if (data.labels.size() != n)
      fail(Errc::shape_mismatch, std::to_string(data.labels.size()) + " labels for " +
                                     std::to_string(n) + " samples");
    const auto classes = static_cast<int>(spec.output_shape().at(0));
    for (const int l : data.labels)
      if (l < 0 || l >= classes)
        fail(Errc::out_of_range, "label " + std::to_string(l) + " outside 0.." + std::to_string(classes - 1));
  } else if (data.targets.shape() != with_batch(n, spec.output_shape())) {
    fail(Errc::shape_mismatch, "regression targets " + shape_string(data.targets.shape()) +
                                   " do not match network output " + shape_string(spec.output_shape()));
  }
}

// Copies the rows listed in `rows` into `out`, which keeps its trailing shape.
void gather(const Tensor& src, std::span<const std::size_t> rows, Tensor& out) {
  Shape shape = src.shape();
  const std::size_t stride = src.size() / shape[0];
  shape[0] = rows.size();
  out.resize(shape);
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy_n(src.data() + rows[i] * stride, stride, out.data() + i * stride);
}

Tensor as_batch(const Network& net, const Tensor& sample) {
  if (sample.shape() == net.spec().input_shape) {
    Tensor b = sample;
    b.reshape(with_batch(1, sample.shape()));
    return b;
  }
  return sample;
}

}  // namespace

OptimizerState::OptimizerState(const TrainConfig& config, const std::vector<Tensor*>& params)
    : kind_(config.optimizer), lr_(config.learning_rate) {
  if (kind_ == Optimizer::adam) {
    for (const auto* p : params) {
      m_.emplace_back(p->shape());
      v_.emplace_back(p->shape());
    }
  }
}

void OptimizerState::step(const std::vector<Tensor*>& params, const std::vector<Tensor>& grads) {
  if (params.size() != grads.size())
    fail(Errc::shape_mismatch, "gradient count does not match parameter count");
  ++t_;
  if (kind_ == Optimizer::sgd) {
    for (std::size_t k = 0; k < params.size(); ++k) {
      double* w = params[k]->data();
      const double* g = grads[k].data();
      for (std::size_t i = 0; i < params[k]->size(); ++i) w[i] -= lr_ * g[i];
    }
    return;
  }
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    double* w = params[k]->data();
    const double* g = grads[k].data();
    double* m = m_[k].data();
    double* v = v_[k].data();
    for (std::size_t i = 0; i < params[k]->size(); ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
      w[i] -= lr_ * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
    }
  }
}

double backward_and_step(Network& net, OptimizerState& optimizer, const Tensor& batch,
                         const Targets& targets, Rng& dropout_rng, Workspace& ws,
                         std::vector<Tensor>& grads) {
  const double loss = net.loss_and_gradients(batch, targets, Mode::train, &dropout_rng, ws, grads);
  if (!std::isfinite(loss)) fail(Errc::divergence, "training loss became non-finite");
  for (const auto& g : grads)
    for (const double v : g.values())
      if (!std::isfinite(v)) fail(Errc::divergence, "gradient became non-finite");
  optimizer.step(net.parameters(), grads);
  return loss;
}

TrainedNetwork train(const NetworkSpec& spec, const TrainingData& data, const TrainConfig& config) {
  config.validate();
  Network net(spec);
  net.initialize(derive_seed(config.seed, 1));
  return train(std::move(net), data, config);
}

TrainedNetwork train(Network initial, const TrainingData& data, const TrainConfig& config) {
  config.validate();
  check_data(initial.spec(), data);
  TrainedNetwork result{std::move(initial), {}, config.seed};
  Network& net = result.network;
  const bool classifier = net.spec().is_classifier();

  Rng shuffle_rng(derive_seed(config.seed, 2));
  Rng dropout_rng(derive_seed(config.seed, 3));
  OptimizerState optimizer(config, net.parameters());
  Workspace ws;
  std::vector<Tensor> grads;
  Tensor batch;
  Tensor batch_targets;
  std::vector<int> batch_labels;

  const std::size_t n = data.size();
  const auto bs = static_cast<std::size_t>(config.batch_size);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double total = 0.0;
    for (std::size_t first = 0; first < n; first += bs) {
      const std::span<const std::size_t> rows(order.data() + first, std::min(bs, n - first));
      gather(data.inputs, rows, batch);
      Targets targets;
      if (classifier) {
        batch_labels.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) batch_labels[i] = data.labels[rows[i]];
        targets.labels = batch_labels;
      } else {
        gather(data.targets, rows, batch_targets);
        targets.values = &batch_targets;
      }
      total += backward_and_step(net, optimizer, batch, targets, dropout_rng, ws, grads) *
               static_cast<double>(rows.size());
    }
    result.history.push_back(total / static_cast<double>(n));
  }
  return result;
}

std::vector<double> predict(const Network& net, const Tensor& sample) {
  return net.forward(as_batch(net, sample)).to_vector();
}

Tensor predict_batch(const Network& net, const Tensor& inputs, std::size_t chunk) {
  if (chunk == 0) fail(Errc::invalid_argument, "chunk size must be positive");
  if (inputs.rank() == 0 || inputs.dim(0) == 0)
    fail(Errc::empty_set, "no inputs to predict");
  const std::size_t n = inputs.dim(0);
  const Shape out_shape = with_batch(n, net.spec().output_shape());
  Tensor out(out_shape);
  const std::size_t width = out.size() / n;
  for (std::size_t first = 0; first < n; first += chunk) {
    const std::size_t count = std::min(chunk, n - first);
    const Tensor part = net.forward(inputs.slice_rows(first, count));
    std::copy_n(part.data(), count * width, out.data() + first * width);
  }
  return out;
}

std::vector<int> predict_classes(const Network& net, const Tensor& inputs) {
  const Tensor probs = predict_batch(net, inputs);
  const std::size_t n = probs.dim(0);
  const std::size_t width = probs.size() / n;
  std::vector<int> out(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double* row = probs.data() + r * width;
    out[r] = static_cast<int>(std::max_element(row, row + width) - row);
  }
  return out;
}

double accuracy_on(const Network& net, const Tensor& inputs, std::span<const int> labels) {
  const auto predicted = predict_classes(net, inputs);
  if (predicted.size() != labels.size())
    fail(Errc::shape_mismatch, "label count does not match input count");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += predicted[i] == labels[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

GradientCheckResult gradient_check(const Network& net, const Tensor& sample, const Targets& target,
                                   double epsilon, Mode mode, std::uint64_t dropout_seed) {
  Network probe = net;
  Tensor input = as_batch(net, sample);

  Workspace ws;
  std::vector<Tensor> grads;
  Tensor input_grad;
  {
    Rng rng(dropout_seed);
    probe.loss_and_gradients(input, target, mode, &rng, ws, grads, &input_grad);
  }
  auto eval = [&] {
    Rng rng(dropout_seed);
    return probe.loss(input, target, mode, &rng);
  };

  GradientCheckResult result;
  auto compare = [&](double& slot, double analytic) {
    const double saved = slot;
    slot = saved + epsilon;
    const double up = eval();
    slot = saved - epsilon;
    const double down = eval();
    slot = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double abs_err = std::abs(analytic - numeric);
    const double rel = abs_err / std::max(std::abs(analytic) + std::abs(numeric), 1e-6);
    result.max_absolute_error = std::max(result.max_absolute_error, abs_err);
    result.max_relative_error = std::max(result.max_relative_error, rel);
    ++result.checked;
  };

  const auto params = probe.parameters();
  for (std::size_t k = 0; k < params.size(); ++k)
    for (std::size_t i = 0; i < params[k]->size(); ++i) compare((*params[k])[i], grads[k][i]);
  for (std::size_t i = 0; i < input.size(); ++i) compare(input[i], input_grad[i]);
  return result;
}

GridSearchResult grid_search(const SpecBuilder& builder, std::span<const int> neuron_grid,
                             const TrainingData& train_data, const TrainingData& validation,
                             const TrainConfig& config) {
  if (neuron_grid.empty()) fail(Errc::invalid_argument, "neuron grid is empty");
  GridSearchResult result;
  for (const int n1 : neuron_grid) {
    for (const int n2 : neuron_grid) {
      GridSearchRow row;
      row.neurons1 = n1;
      row.neurons2 = n2;
      try {
        const NetworkSpec spec = builder(n1, n2);
        row.parameters = spec.parameter_count();
        const TrainedNetwork trained = train(spec, train_data, config);
        row.train_accuracy = accuracy_on(trained.network, train_data.inputs, train_data.labels);
        row.validation_accuracy = accuracy_on(trained.network, validation.inputs, validation.labels);
      } catch (const Error& e) {
        row.error = std::string(to_string(e.code())) + ": " + e.what();
      }
      result.rows.push_back(std::move(row));
    }
  }
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& r = result.rows[i];
    if (r.error) continue;
    if (!result.best) {
      result.best = i;
      continue;
    }
    const auto& b = result.rows[*result.best];
    if (r.validation_accuracy > b.validation_accuracy ||
        (r.validation_accuracy == b.validation_accuracy && r.parameters < b.parameters))
      result.best = i;
  }
  return result;
}

}  // namespace finimg::nnet
