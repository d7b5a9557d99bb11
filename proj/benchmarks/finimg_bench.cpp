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

#include <benchmark/benchmark.h>

#include <vector>

#include "finimg/encoding.hpp"
#include "finimg/hilbert.hpp"
#include "finimg/nnet/network.hpp"
#include "finimg/nnet/spec.hpp"
#include "finimg/nnet/train.hpp"
#include "finimg/rng.hpp"
#include "finimg/schema.hpp"

using namespace finimg;

namespace {

nnet::Tensor random_tensor(nnet::Shape shape, std::uint64_t seed) {
  nnet::Tensor t(std::move(shape));
  Rng rng(seed);
  for (auto& v : t.values()) v = rng.uniform(-1.0, 1.0);
  return t;
}

void BM_HilbertD2xy(benchmark::State& state) {
  const HilbertOrder order{static_cast<int>(state.range(0))};
  for (auto _ : state)
    for (std::int64_t d = 0; d < order.capacity(); ++d) benchmark::DoNotOptimize(hilbert_d2xy(order, d));
  state.SetItemsProcessed(state.iterations() * order.capacity());
}
BENCHMARK(BM_HilbertD2xy)->Arg(4)->Arg(6)->Arg(8);

void BM_HilbertXy2d(benchmark::State& state) {
  const HilbertOrder order{static_cast<int>(state.range(0))};
  for (auto _ : state)
    for (std::int64_t y = 0; y < order.side(); ++y)
      for (std::int64_t x = 0; x < order.side(); ++x) benchmark::DoNotOptimize(hilbert_xy2d(order, x, y));
  state.SetItemsProcessed(state.iterations() * order.capacity());
}
BENCHMARK(BM_HilbertXy2d)->Arg(4)->Arg(6)->Arg(8);

// Rendering one observation through a precomputed layout.
void BM_RenderLayout(benchmark::State& state) {
  const auto schema = FeatureSchema::canonical_fundamental();
  const auto method = static_cast<Method>(state.range(0));
  const auto layout = make_layout(ArrangementSpec::defaults(method, schema, 1), schema);
  std::vector<double> values(schema.size(), 0.5);
  std::vector<double> out(static_cast<std::size_t>(layout.rows * layout.cols));
  for (auto _ : state) {
    layout.render_into(values, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_RenderLayout)->DenseRange(0, 6);

void BM_MakeLayout(benchmark::State& state) {
  const auto schema = FeatureSchema::canonical_fundamental();
  const auto method = static_cast<Method>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(make_layout(ArrangementSpec::defaults(method, schema, ++seed), schema));
  state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_MakeLayout)->DenseRange(0, 6);

// Default CNN on the 18x27 fundamental canvas, batch of 32.
void BM_Cnn2dForward(benchmark::State& state) {
  nnet::Network net(nnet::build_cnn2d(18, 27));
  net.initialize(1);
  const auto batch = random_tensor({32, 1, 18, 27}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(batch));
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_Cnn2dForward)->Unit(benchmark::kMillisecond);

void BM_Cnn2dForwardBackward(benchmark::State& state) {
  nnet::Network net(nnet::build_cnn2d(18, 27));
  net.initialize(1);
  const auto batch = random_tensor({32, 1, 18, 27}, 2);
  std::vector<int> labels(32);
  for (int i = 0; i < 32; ++i) labels[static_cast<std::size_t>(i)] = i % 12;
  nnet::Workspace ws;
  std::vector<nnet::Tensor> grads;
  for (auto _ : state)
    benchmark::DoNotOptimize(net.loss_and_gradients(batch, {labels, nullptr}, nnet::Mode::infer, nullptr, ws, grads));
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_Cnn2dForwardBackward)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
