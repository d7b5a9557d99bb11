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

#include <gtest/gtest.h>

#include <algorithm>

#include "finimg/nnet/train.hpp"
#include "nnet_fixtures.hpp"
#include "test_util.hpp"

using namespace finimg;
using namespace finimg::nnet;
using test_util::random_tensor;

namespace {

// Three separable blobs in 6 dimensions.
TrainingData blobs(std::size_t per_class, std::uint64_t seed) {
  TrainingData d;
  d.inputs = Tensor({per_class * 3, 6});
  Rng rng(seed);
  for (std::size_t i = 0; i < per_class * 3; ++i) {
    const int cls = static_cast<int>(i % 3);
    d.labels.push_back(cls);
    for (std::size_t j = 0; j < 6; ++j)
      d.inputs[i * 6 + j] = (static_cast<int>(j) / 2 == cls ? 2.0 : 0.0) + 0.3 * rng.normal();
  }
  return d;
}

TrainConfig quick(int epochs = 40) {
  TrainConfig c;
  c.epochs = epochs;
  c.learning_rate = 0.01;
  c.batch_size = 8;
  c.seed = 5;
  return c;
}

}  // namespace

TEST(Train, LearnsSeparableData) {
  const auto data = blobs(20, 1);
  const auto trained = train(build_mlp(6, 16, 16, 0.1), data, quick());
  ASSERT_EQ(trained.history.size(), 40u);
  EXPECT_LT(trained.history.back(), trained.history.front());
  EXPECT_DOUBLE_EQ(accuracy_on(trained.network, data.inputs, data.labels), 1.0);
  const auto test = blobs(20, 2);
  EXPECT_GE(accuracy_on(trained.network, test.inputs, test.labels), 0.95);
}

TEST(Train, SgdAlsoLearns) {
  auto c = quick(60);
  c.optimizer = Optimizer::sgd;
  c.learning_rate = 0.1;
  const auto data = blobs(20, 1);
  const auto trained = train(build_mlp(6, 16, 16, 0.0), data, c);
  EXPECT_GE(accuracy_on(trained.network, data.inputs, data.labels), 0.95);
}

TEST(Train, Deterministic) {
  const auto data = blobs(10, 3);
  const auto a = train(build_mlp(6, 8, 8), data, quick(5));
  const auto b = train(build_mlp(6, 8, 8), data, quick(5));
  EXPECT_EQ(a.history, b.history);
  const auto pa = a.network.parameters();
  const auto pb = b.network.parameters();
  for (std::size_t k = 0; k < pa.size(); ++k) {
    ASSERT_EQ(pa[k]->shape(), pb[k]->shape());
    for (std::size_t i = 0; i < pa[k]->size(); ++i) ASSERT_EQ((*pa[k])[i], (*pb[k])[i]) << k << " " << i;
    EXPECT_TRUE(*pa[k] == *pb[k]) << k;
  }
  auto other = quick(5);
  other.seed = 6;
  EXPECT_NE(train(build_mlp(6, 8, 8), data, other).history, a.history);
}

TEST(Train, ZeroEpochsKeepsInitialization) {
  const auto data = blobs(4, 3);
  const auto t = train(build_mlp(6, 8, 8), data, quick(0));
  EXPECT_TRUE(t.history.empty());
  Network fresh(build_mlp(6, 8, 8));
  fresh.initialize(derive_seed(5, 1));
  EXPECT_EQ(t.network.forward(data.inputs), fresh.forward(data.inputs));
}

TEST(Train, RegressionLowersError) {
  TrainingData d;
  d.inputs = random_tensor({64, 5}, 4);
  d.targets = d.inputs;
  auto c = quick(150);
  c.batch_size = 16;
  const auto t = train(build_autoencoder(5, 5, 16), d, c);
  EXPECT_LT(t.history.back(), 0.1 * t.history.front());
}

TEST(Train, DivergenceIsReported) {
  TrainingData d;
  d.inputs = random_tensor({8, 3}, 4, 1e150);
  d.targets = d.inputs;
  auto c = quick(3);
  c.optimizer = Optimizer::sgd;
  c.learning_rate = 1e150;
  EXPECT_ERRC(train(build_autoencoder(3, 2, 4), d, c), Errc::divergence);
}

TEST(Train, InvalidInputs) {
  auto data = blobs(4, 1);
  auto c = quick(1);
  c.batch_size = 0;
  EXPECT_ERRC(train(build_mlp(6), data, c), Errc::invalid_argument);
  c = quick(1);
  c.learning_rate = -1;
  EXPECT_ERRC(train(build_mlp(6), data, c), Errc::invalid_argument);
  data.labels.pop_back();
  EXPECT_ERRC(train(build_mlp(6), data, quick(1)), Errc::shape_mismatch);
  auto bad = blobs(4, 1);
  bad.labels[0] = 12;
  EXPECT_ANY_THROW(train(build_mlp(6), bad, quick(1)));
}

TEST(Train, PredictionHelpersAgree) {
  const auto data = blobs(10, 1);
  const auto t = train(build_mlp(6, 8, 8), data, quick(5));
  const auto probs = predict_batch(t.network, data.inputs, 7);
  const auto direct = t.network.forward(data.inputs);
  ASSERT_EQ(probs.shape(), direct.shape());
  for (std::size_t i = 0; i < probs.size(); ++i) EXPECT_NEAR(probs[i], direct[i], 1e-12);
  const auto classes = predict_classes(t.network, data.inputs);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto row = probs.values().subspan(i * 12, 12);
    EXPECT_EQ(classes[i], std::max_element(row.begin(), row.end()) - row.begin());
    hits += classes[i] == data.labels[i];
  }
  EXPECT_DOUBLE_EQ(accuracy_on(t.network, data.inputs, data.labels),
                   static_cast<double>(hits) / static_cast<double>(classes.size()));
  const auto& v = data.inputs.storage();
  const auto one = predict(t.network, Tensor({6}, std::vector<double>(v.begin() + 18, v.begin() + 24)));
  for (std::size_t k = 0; k < 12; ++k) EXPECT_DOUBLE_EQ(one[k], probs[3 * 12 + k]);
}

TEST(Train, GridSearchCoversGridAndPicksBest) {
  const auto data = blobs(10, 1);
  const auto val = blobs(10, 2);
  const std::vector<int> grid = {2, 4, 8, 16};
  const auto result = grid_search([](int a, int b) { return build_mlp(6, a, b, 0.0); }, grid, data,
                                  val, quick(3));
  ASSERT_EQ(result.rows.size(), 16u);
  ASSERT_TRUE(result.best.has_value());
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_EQ(result.rows[i].neurons1, grid[i / 4]);
    EXPECT_EQ(result.rows[i].neurons2, grid[i % 4]);
    EXPECT_EQ(result.rows[i].parameters, build_mlp(6, grid[i / 4], grid[i % 4]).parameter_count());
  }
  std::size_t oracle = 0;
  for (std::size_t i = 1; i < 16; ++i) {
    const auto& r = result.rows[i];
    const auto& b = result.rows[oracle];
    if (r.validation_accuracy > b.validation_accuracy ||
        (r.validation_accuracy == b.validation_accuracy && r.parameters < b.parameters))
      oracle = i;
  }
  EXPECT_EQ(*result.best, oracle);
  for (const auto& r : result.rows)
    EXPECT_LE(r.validation_accuracy, result.rows[*result.best].validation_accuracy);
}

TEST(Train, GridSearchRecordsFailures) {
  const auto data = blobs(4, 1);
  const std::vector<int> grid = {0, 4};
  const auto result = grid_search([](int a, int b) { return build_mlp(6, a, b, 0.0); }, grid, data,
                                  data, quick(1));
  ASSERT_EQ(result.rows.size(), 4u);
  EXPECT_TRUE(result.rows[0].error.has_value());
  EXPECT_FALSE(result.rows[3].error.has_value());
  EXPECT_EQ(*result.best, 3u);
}
