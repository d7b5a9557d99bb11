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

#include "finimg/nnet/layers.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "finimg/error.hpp"

namespace finimg::nnet {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMat>;
using ConstMatMap = Eigen::Map<const RowMat>;
using VecMap = Eigen::Map<Eigen::VectorXd>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void reject(const LayerSpec& spec, std::size_t position, const Shape& input,
                         const std::string& why) {
  fail(Errc::shape_mismatch, "layer " + std::to_string(position) + " " + describe(spec) +
                                 " cannot take input " + shape_string(input) + ": " + why);
}

Shape with_batch(std::size_t n, const Shape& s) {
  Shape out;
  out.reserve(s.size() + 1);
  out.push_back(n);
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

void uniform_fill(Tensor& t, double limit, Rng& rng) {
  for (auto& v : t.values()) v = rng.uniform(-limit, limit);
}

// ---------------------------------------------------------------------------

class DenseLayer : public Layer {
 public:
  DenseLayer(Shape input, int units)
      : Layer(input, {static_cast<std::size_t>(units)}), in_(input[0]), units_(static_cast<std::size_t>(units)) {
    params_.emplace_back(Shape{units_, in_});
    params_.emplace_back(Shape{units_});
  }

  std::unique_ptr<Layer> clone() const override { return std::make_unique<DenseLayer>(*this); }
  LayerSpec spec() const override { return DenseSpec{static_cast<int>(units_)}; }

  void initialize(Rng& rng) override {
    uniform_fill(params_[0], std::sqrt(6.0 / static_cast<double>(in_)), rng);
    params_[1].fill(0.0);
  }

  void forward(const Tensor& in, Tensor& out, Mode, LayerCache&, Rng*) const override {
    const auto n = batch_of(in);
    out.resize({n, units_});
    affine(in.data(), out.data(), n);
  }

  void backward(const Tensor& in, const Tensor&, const Tensor& dout, Tensor* din, LayerCache&,
                std::span<Tensor> grads) const override {
    affine_backward(in, dout.data(), din, grads);
  }

 protected:
  void affine(const double* x, double* y, std::size_t n) const {
    ConstMatMap X(x, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(in_));
    ConstMatMap W(params_[0].data(), static_cast<Eigen::Index>(units_), static_cast<Eigen::Index>(in_));
    ConstVecMap b(params_[1].data(), static_cast<Eigen::Index>(units_));
    MatMap Y(y, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(units_));
    Y.noalias() = X * W.transpose();
    Y.rowwise() += b.transpose();
  }

  void affine_backward(const Tensor& in, const double* dy, Tensor* din, std::span<Tensor> grads) const {
    const auto n = static_cast<Eigen::Index>(in.dim(0));
    const auto d = static_cast<Eigen::Index>(in_);
    const auto u = static_cast<Eigen::Index>(units_);
    ConstMatMap X(in.data(), n, d);
    ConstMatMap dY(dy, n, u);
    MatMap dW(grads[0].data(), u, d);
    VecMap db(grads[1].data(), u);
    dW.noalias() += dY.transpose() * X;
    db += dY.colwise().sum().transpose();
    if (din) {
      din->resize(in.shape());
      ConstMatMap W(params_[0].data(), u, d);
      MatMap dX(din->data(), n, d);
      dX.noalias() = dY * W;
    }
  }

  std::size_t in_;
  std::size_t units_;
};

class SoftmaxOutputLayer final : public DenseLayer {
 public:
  SoftmaxOutputLayer(Shape input, int classes) : DenseLayer(std::move(input), classes) {}

  std::unique_ptr<Layer> clone() const override { return std::make_unique<SoftmaxOutputLayer>(*this); }
  LayerSpec spec() const override { return SoftmaxOutputSpec{static_cast<int>(units_)}; }

  void forward(const Tensor& in, Tensor& out, Mode, LayerCache&, Rng*) const override {
    const auto n = batch_of(in);
    out.resize({n, units_});
    affine(in.data(), out.data(), n);
    for (std::size_t r = 0; r < n; ++r) {
      double* row = out.data() + r * units_;
      const double m = *std::max_element(row, row + units_);
      double sum = 0.0;
      for (std::size_t k = 0; k < units_; ++k) {
        row[k] = std::exp(row[k] - m);
        sum += row[k];
      }
      for (std::size_t k = 0; k < units_; ++k) row[k] /= sum;
    }
  }

  // `dout` is the gradient w.r.t. the probabilities.
  void backward(const Tensor& in, const Tensor& out, const Tensor& dout, Tensor* din,
                LayerCache& cache, std::span<Tensor> grads) const override {
    const auto n = in.dim(0);
    cache.scratch.resize(n * units_);
    for (std::size_t r = 0; r < n; ++r) {
      const double* p = out.data() + r * units_;
      const double* dp = dout.data() + r * units_;
      double dot = 0.0;
      for (std::size_t k = 0; k < units_; ++k) dot += p[k] * dp[k];
      double* dz = cache.scratch.data() + r * units_;
      for (std::size_t k = 0; k < units_; ++k) dz[k] = p[k] * (dp[k] - dot);
    }
    affine_backward(in, cache.scratch.data(), din, grads);
  }
};

// ---------------------------------------------------------------------------

// Stride-1 cross-correlation via im2col + GEMM. 1D convolutions are run as
// 2D with a single input row.
class ConvLayer final : public Layer {
 public:
  struct Geometry {
    std::size_t channels, height, width;
    std::size_t filters, kh, kw, ph, pw;
    std::size_t out_h, out_w;
    bool one_d;
  };

  ConvLayer(Shape input, Shape output, Geometry g, LayerSpec spec)
      : Layer(std::move(input), std::move(output)), g_(g), spec_(std::move(spec)) {
    params_.emplace_back(Shape{g_.filters, patch()});
    params_.emplace_back(Shape{g_.filters});
  }

  std::unique_ptr<Layer> clone() const override { return std::make_unique<ConvLayer>(*this); }

  LayerSpec spec() const override { return spec_; }

  void initialize(Rng& rng) override {
    uniform_fill(params_[0], std::sqrt(6.0 / static_cast<double>(patch())), rng);
    params_[1].fill(0.0);
  }

  void forward(const Tensor& in, Tensor& out, Mode, LayerCache& cache, Rng*) const override {
    const auto n = batch_of(in);
    const auto k = patch();
    const auto p = g_.out_h * g_.out_w;
    const auto np = n * p;
    cache.buffer.resize(k * np);
    im2col(in.data(), n, cache.buffer.data());

    cache.scratch.resize(g_.filters * np);
    ConstMatMap W(params_[0].data(), idx(g_.filters), idx(k));
    ConstMatMap col(cache.buffer.data(), idx(k), idx(np));
    MatMap tmp(cache.scratch.data(), idx(g_.filters), idx(np));
    tmp.noalias() = W * col;

    out.resize(with_batch(n, output_shape_));
    const double* bias = params_[1].data();
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t f = 0; f < g_.filters; ++f) {
        const double* src = cache.scratch.data() + f * np + s * p;
        double* dst = out.data() + (s * g_.filters + f) * p;
        for (std::size_t q = 0; q < p; ++q) dst[q] = src[q] + bias[f];
      }
    }
  }

  void backward(const Tensor& in, const Tensor&, const Tensor& dout, Tensor* din, LayerCache& cache,
                std::span<Tensor> grads) const override {
    const auto n = in.dim(0);
    const auto k = patch();
    const auto p = g_.out_h * g_.out_w;
    const auto np = n * p;
    cache.scratch.resize(g_.filters * np);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t f = 0; f < g_.filters; ++f)
        std::copy_n(dout.data() + (s * g_.filters + f) * p, p, cache.scratch.data() + f * np + s * p);

    ConstMatMap dtmp(cache.scratch.data(), idx(g_.filters), idx(np));
    ConstMatMap col(cache.buffer.data(), idx(k), idx(np));
    MatMap dW(grads[0].data(), idx(g_.filters), idx(k));
    VecMap db(grads[1].data(), idx(g_.filters));
    dW.noalias() += dtmp * col.transpose();
    db += dtmp.rowwise().sum();

    if (din) {
      cache.scratch2.resize(k * np);
      ConstMatMap W(params_[0].data(), idx(g_.filters), idx(k));
      MatMap dcol(cache.scratch2.data(), idx(k), idx(np));
      dcol.noalias() = W.transpose() * dtmp;
      din->resize(in.shape());
      din->fill(0.0);
      col2im(cache.scratch2.data(), n, din->data());
    }
  }

 private:
  static Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }
  std::size_t patch() const { return g_.channels * g_.kh * g_.kw; }

  template <class Visit>
  void for_each_tap(std::size_t n, Visit&& visit) const {
    const auto p = g_.out_h * g_.out_w;
    const auto np = n * p;
    const auto h = static_cast<long long>(g_.height);
    const auto w = static_cast<long long>(g_.width);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t c = 0; c < g_.channels; ++c) {
        const std::size_t plane = (s * g_.channels + c) * g_.height * g_.width;
        for (std::size_t ki = 0; ki < g_.kh; ++ki) {
          for (std::size_t kj = 0; kj < g_.kw; ++kj) {
            const std::size_t row = (c * g_.kh + ki) * g_.kw + kj;
            const std::size_t base = row * np + s * p;
            for (std::size_t oh = 0; oh < g_.out_h; ++oh) {
              const long long ih = static_cast<long long>(oh + ki) - static_cast<long long>(g_.ph);
              for (std::size_t ow = 0; ow < g_.out_w; ++ow) {
                const long long iw = static_cast<long long>(ow + kj) - static_cast<long long>(g_.pw);
                const bool inside = ih >= 0 && ih < h && iw >= 0 && iw < w;
                visit(base + oh * g_.out_w + ow, inside,
                      plane + static_cast<std::size_t>(inside ? ih * w + iw : 0));
              }
            }
          }
        }
      }
    }
  }

  void im2col(const double* in, std::size_t n, double* col) const {
    for_each_tap(n, [&](std::size_t ci, bool inside, std::size_t ii) {
      col[ci] = inside ? in[ii] : 0.0;
    });
  }

  void col2im(const double* col, std::size_t n, double* din) const {
    for_each_tap(n, [&](std::size_t ci, bool inside, std::size_t ii) {
      if (inside) din[ii] += col[ci];
    });
  }

  Geometry g_;
  LayerSpec spec_;
};

// ---------------------------------------------------------------------------

class MaxPoolLayer final : public Layer {
 public:
  MaxPoolLayer(Shape input, Shape output, std::size_t window)
      : Layer(std::move(input), std::move(output)), window_(window) {}

  std::unique_ptr<Layer> clone() const override { return std::make_unique<MaxPoolLayer>(*this); }
  LayerSpec spec() const override { return MaxPoolSpec{static_cast<int>(window_)}; }

  void forward(const Tensor& in, Tensor& out, Mode, LayerCache& cache, Rng*) const override {
    const auto n = batch_of(in);
    out.resize(with_batch(n, output_shape_));
    cache.index.resize(out.size());
    const bool two_d = input_shape_.size() == 3;
    const std::size_t channels = input_shape_[0];
    const std::size_t ih = two_d ? input_shape_[1] : 1;
    const std::size_t iw = input_shape_.back();
    const std::size_t oh = two_d ? output_shape_[1] : 1;
    const std::size_t ow = output_shape_.back();
    const std::size_t wh = two_d ? window_ : 1;
    std::size_t o = 0;
    for (std::size_t plane = 0; plane < n * channels; ++plane) {
      const std::size_t base = plane * ih * iw;
      for (std::size_t r = 0; r < oh; ++r) {
        for (std::size_t c = 0; c < ow; ++c, ++o) {
          std::size_t best = base + (r * wh) * iw + c * window_;
          double best_v = in[best];
          for (std::size_t dr = 0; dr < wh; ++dr) {
            for (std::size_t dc = 0; dc < window_; ++dc) {
              const std::size_t i = base + (r * wh + dr) * iw + c * window_ + dc;
              if (in[i] > best_v) {
                best_v = in[i];
                best = i;
              }
            }
          }
          out[o] = best_v;
          cache.index[o] = static_cast<std::uint32_t>(best);
        }
      }
    }
  }

  void backward(const Tensor& in, const Tensor&, const Tensor& dout, Tensor* din, LayerCache& cache,
                std::span<Tensor>) const override {
    if (!din) return;
    din->resize(in.shape());
    din->fill(0.0);
    for (std::size_t o = 0; o < dout.size(); ++o) (*din)[cache.index[o]] += dout[o];
  }

 private:
  std::size_t window_;
};

class ActivationLayer final : public Layer {
 public:
  ActivationLayer(Shape shape, ActivationKind kind) : Layer(shape, shape), kind_(kind) {}

  std::unique_ptr<Layer> clone() const override { return std::make_unique<ActivationLayer>(*this); }
  LayerSpec spec() const override { return ActivationSpec{kind_}; }

  void forward(const Tensor& in, Tensor& out, Mode, LayerCache&, Rng*) const override {
    batch_of(in);
    out.resize(in.shape());
    const double* x = in.data();
    double* y = out.data();
    const std::size_t n = in.size();
    switch (kind_) {
      case ActivationKind::relu:
        for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
        break;
      case ActivationKind::linear:
        std::copy_n(x, n, y);
        break;
      case ActivationKind::tanh:
        for (std::size_t i = 0; i < n; ++i) y[i] = std::tanh(x[i]);
        break;
      case ActivationKind::sigmoid:
        for (std::size_t i = 0; i < n; ++i) y[i] = 1.0 / (1.0 + std::exp(-x[i]));
        break;
    }
  }

  void backward(const Tensor& in, const Tensor& out, const Tensor& dout, Tensor* din, LayerCache&,
                std::span<Tensor>) const override {
    if (!din) return;
    din->resize(in.shape());
    const double* x = in.data();
    const double* y = out.data();
    const double* dy = dout.data();
    double* dx = din->data();
    const std::size_t n = in.size();
    switch (kind_) {
      case ActivationKind::relu:
        for (std::size_t i = 0; i < n; ++i) dx[i] = x[i] > 0.0 ? dy[i] : 0.0;
        break;
      case ActivationKind::linear:
        std::copy_n(dy, n, dx);
        break;
      case ActivationKind::tanh:
        for (std::size_t i = 0; i < n; ++i) dx[i] = dy[i] * (1.0 - y[i] * y[i]);
        break;
      case ActivationKind::sigmoid:
        for (std::size_t i = 0; i < n; ++i) dx[i] = dy[i] * y[i] * (1.0 - y[i]);
        break;
    }
  }

 private:
  ActivationKind kind_;
};

// Inverted dropout: survivors are scaled by 1/(1-rate) in training so the
// inference pass is the identity.
class DropoutLayer final : public Layer {
 public:
  DropoutLayer(Shape shape, double rate) : Layer(shape, shape), rate_(rate) {}

  std::unique_ptr<Layer> clone() const override { return std::make_unique<DropoutLayer>(*this); }
  LayerSpec spec() const override { return DropoutSpec{rate_}; }

  void forward(const Tensor& in, Tensor& out, Mode mode, LayerCache& cache, Rng* rng) const override {
    batch_of(in);
    out = in;
    if (mode == Mode::infer || rate_ == 0.0) {
      cache.buffer.clear();
      return;
    }
    if (!rng) fail(Errc::invalid_argument, "dropout in train mode needs a random generator");
    const double keep_scale = 1.0 / (1.0 - rate_);
    cache.buffer.resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
      cache.buffer[i] = rng->bernoulli(rate_) ? 0.0 : keep_scale;
      out[i] *= cache.buffer[i];
    }
  }

  void backward(const Tensor& in, const Tensor&, const Tensor& dout, Tensor* din, LayerCache& cache,
                std::span<Tensor>) const override {
    if (!din) return;
    *din = dout;
    din->reshape(in.shape());
    if (cache.buffer.empty()) return;
    for (std::size_t i = 0; i < din->size(); ++i) (*din)[i] *= cache.buffer[i];
  }

 private:
  double rate_;
};

class FlattenLayer final : public Layer {
 public:
  explicit FlattenLayer(Shape input) : Layer(input, {element_count(input)}) {}

  std::unique_ptr<Layer> clone() const override { return std::make_unique<FlattenLayer>(*this); }
  LayerSpec spec() const override { return FlattenSpec{}; }

  void forward(const Tensor& in, Tensor& out, Mode, LayerCache&, Rng*) const override {
    const auto n = batch_of(in);
    out = in;
    out.reshape({n, output_shape_[0]});
  }

  void backward(const Tensor& in, const Tensor&, const Tensor& dout, Tensor* din, LayerCache&,
                std::span<Tensor>) const override {
    if (!din) return;
    *din = dout;
    din->reshape(in.shape());
  }
};

}  // namespace

void Layer::initialize(Rng&) {}

std::size_t Layer::batch_of(const Tensor& in) const {
  const auto& s = in.shape();
  if (s.size() != input_shape_.size() + 1 || !std::equal(input_shape_.begin(), input_shape_.end(), s.begin() + 1))
    fail(Errc::shape_mismatch, "layer " + describe(spec()) + " expects (N, " +
                                   shape_string(input_shape_).substr(1) + " but got " +
                                   shape_string(s));
  return s[0];
}

Shape layer_output_shape(const LayerSpec& spec, const Shape& in, std::size_t position) {
  return std::visit(
      Overloaded{
          [&](const DenseSpec& s) -> Shape {
            if (in.size() != 1) reject(spec, position, in, "dense layers need flat input");
            if (s.units < 1) reject(spec, position, in, "units must be positive");
            return {static_cast<std::size_t>(s.units)};
          },
          [&](const SoftmaxOutputSpec& s) -> Shape {
            if (in.size() != 1) reject(spec, position, in, "softmax output needs flat input");
            if (s.classes < 1) reject(spec, position, in, "classes must be positive");
            return {static_cast<std::size_t>(s.classes)};
          },
          [&](const Conv1DSpec& s) -> Shape {
            if (in.size() != 2) reject(spec, position, in, "expects (channels, length)");
            if (s.filters < 1 || s.kernel < 1) reject(spec, position, in, "filters and kernel must be positive");
            const auto k = static_cast<std::size_t>(s.kernel);
            const std::size_t pad = s.same_padding ? k / 2 : 0;
            if (in[1] + 2 * pad < k) reject(spec, position, in, "input shorter than kernel");
            return {static_cast<std::size_t>(s.filters), in[1] + 2 * pad - k + 1};
          },
          [&](const Conv2DSpec& s) -> Shape {
            if (in.size() != 3) reject(spec, position, in, "expects (channels, height, width)");
            if (s.filters < 1 || s.kernel_h < 1 || s.kernel_w < 1)
              reject(spec, position, in, "filters and kernel must be positive");
            const auto kh = static_cast<std::size_t>(s.kernel_h);
            const auto kw = static_cast<std::size_t>(s.kernel_w);
            const std::size_t ph = s.same_padding ? kh / 2 : 0;
            const std::size_t pw = s.same_padding ? kw / 2 : 0;
            if (in[1] + 2 * ph < kh || in[2] + 2 * pw < kw)
              reject(spec, position, in, "input smaller than kernel");
            return {static_cast<std::size_t>(s.filters), in[1] + 2 * ph - kh + 1, in[2] + 2 * pw - kw + 1};
          },
          [&](const MaxPoolSpec& s) -> Shape {
            if (in.size() != 2 && in.size() != 3) reject(spec, position, in, "expects rank 2 or 3 input");
            if (s.window < 1) reject(spec, position, in, "window must be positive");
            const auto w = static_cast<std::size_t>(s.window);
            Shape out = in;
            for (std::size_t a = 1; a < out.size(); ++a) {
              out[a] = in[a] / w;
              if (out[a] == 0) reject(spec, position, in, "pooled extent would be zero");
            }
            return out;
          },
          [&](const DropoutSpec& s) -> Shape {
            if (!(s.rate >= 0.0 && s.rate < 1.0)) reject(spec, position, in, "rate must be in [0, 1)");
            return in;
          },
          [&](const ActivationSpec&) -> Shape { return in; },
          [&](const FlattenSpec&) -> Shape { return {element_count(in)}; },
      },
      spec);
}

std::unique_ptr<Layer> make_layer(const LayerSpec& spec, const Shape& in, std::size_t position) {
  Shape out = layer_output_shape(spec, in, position);
  return std::visit(
      Overloaded{
          [&](const DenseSpec& s) -> std::unique_ptr<Layer> { return std::make_unique<DenseLayer>(in, s.units); },
          [&](const SoftmaxOutputSpec& s) -> std::unique_ptr<Layer> {
            return std::make_unique<SoftmaxOutputLayer>(in, s.classes);
          },
          [&](const Conv1DSpec& s) -> std::unique_ptr<Layer> {
            const auto k = static_cast<std::size_t>(s.kernel);
            const std::size_t pad = s.same_padding ? k / 2 : 0;
            ConvLayer::Geometry g{in[0], 1, in[1], static_cast<std::size_t>(s.filters), 1, k, 0, pad, 1, out[1], true};
            return std::make_unique<ConvLayer>(in, out, g, spec);
          },
          [&](const Conv2DSpec& s) -> std::unique_ptr<Layer> {
            const auto kh = static_cast<std::size_t>(s.kernel_h);
            const auto kw = static_cast<std::size_t>(s.kernel_w);
            ConvLayer::Geometry g{in[0], in[1], in[2], static_cast<std::size_t>(s.filters), kh, kw,
                                  s.same_padding ? kh / 2 : 0, s.same_padding ? kw / 2 : 0, out[1], out[2], false};
            return std::make_unique<ConvLayer>(in, out, g, spec);
          },
          [&](const MaxPoolSpec& s) -> std::unique_ptr<Layer> {
            return std::make_unique<MaxPoolLayer>(in, out, static_cast<std::size_t>(s.window));
          },
          [&](const DropoutSpec& s) -> std::unique_ptr<Layer> { return std::make_unique<DropoutLayer>(in, s.rate); },
          [&](const ActivationSpec& s) -> std::unique_ptr<Layer> {
            return std::make_unique<ActivationLayer>(in, s.kind);
          },
          [&](const FlattenSpec&) -> std::unique_ptr<Layer> { return std::make_unique<FlattenLayer>(in); },
      },
      spec);
}

}  // namespace finimg::nnet
