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

#include <cmath>
#include <cstdio>

#include "finimg/metrics.hpp"
#include "finimg/rng.hpp"
#include "test_util.hpp"

using namespace finimg;

namespace {

std::string two_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

PredictionSet random_set(Rng& rng) {
  const auto n = 1 + rng.below(50);
  std::vector<int> y, yhat;
  for (std::size_t k = 0; k < n; ++k) {
    y.push_back(static_cast<int>(rng.below(12)));
    // Bias towards correct and near-miss predictions.
    const int off = rng.bernoulli(0.4) ? 0 : static_cast<int>(rng.below(7)) - 3;
    yhat.push_back(std::clamp(y.back() + off, 0, 11));
  }
  return {y, yhat};
}

}  // namespace

TEST(Metrics, PredictionSetValidates) {
  EXPECT_ERRC(PredictionSet({1, 2}, {1}), Errc::shape_mismatch);
  EXPECT_ERRC(PredictionSet({12}, {1}), Errc::out_of_range);
  EXPECT_ERRC(PredictionSet({1}, {-1}), Errc::out_of_range);
  EXPECT_ERRC(accuracy(PredictionSet{}), Errc::empty_set);
  EXPECT_ERRC(notch_frequency(PredictionSet{}), Errc::empty_set);
}

TEST(Metrics, HandExamples) {
  const PredictionSet p({6, 6, 8}, {6, 7, 8});
  EXPECT_DOUBLE_EQ(accuracy(p), 2.0 / 3.0);
  const auto d = notch_frequency(p);
  EXPECT_EQ(d.freq.size(), 2u);
  EXPECT_DOUBLE_EQ(d.freq.at(0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(d.freq.at(1), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(expected_abs_notch(d), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(conditional_notch(d), 1.0);

  const PredictionSet q({5, 5}, {3, 7});
  const auto e = notch_frequency(q);
  EXPECT_DOUBLE_EQ(e.freq.at(-2), 0.5);
  EXPECT_DOUBLE_EQ(e.freq.at(2), 0.5);
  EXPECT_DOUBLE_EQ(expected_abs_notch(e), 2.0);
  EXPECT_DOUBLE_EQ(conditional_notch(e), 2.0);
  EXPECT_DOUBLE_EQ(accuracy(q), 0.0);
}

TEST(Metrics, AllCorrect) {
  const PredictionSet p({0, 4, 11}, {0, 4, 11});
  EXPECT_EQ(accuracy(p), 1.0);
  const auto d = notch_frequency(p);
  EXPECT_EQ(d.freq, (std::map<int, double>{{0, 1.0}}));
  EXPECT_EQ(expected_abs_notch(d), 0.0);
  EXPECT_ERRC(conditional_notch(d), Errc::not_applicable);
  const auto s = evaluate(p);
  EXPECT_FALSE(s.conditional_notch.has_value());
  EXPECT_EQ(s.macro.f1, 1.0);
}

TEST(Metrics, DistributionValidation) {
  NotchDistribution d;
  d.freq = {{0, 0.5}, {1, 0.5}};
  EXPECT_NO_THROW(d.validate());
  d.freq[1] = 0.4;
  EXPECT_ERRC(d.validate(), Errc::validation);
  d.freq = {{12, 1.0}};
  EXPECT_ERRC(d.validate(), Errc::validation);
}

// Loop-based recomputation on random sets.
TEST(Metrics, MatchesBruteForce) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_set(rng);
    const double n = static_cast<double>(p.size());
    std::size_t hits = 0;
    for (std::size_t k = 0; k < p.size(); ++k) hits += p.truth[k] == p.predicted[k];
    ASSERT_EQ(accuracy(p), static_cast<double>(hits) / n);

    const auto d = notch_frequency(p);
    double total = 0.0, e = 0.0, num = 0.0, den = 0.0;
    for (int i = -11; i <= 11; ++i) {
      std::size_t c = 0;
      for (std::size_t k = 0; k < p.size(); ++k) c += p.predicted[k] - p.truth[k] == i;
      const double f = static_cast<double>(c) / n;
      ASSERT_EQ(d.freq.count(i) ? d.freq.at(i) : 0.0, f);
      total += f;
      e += std::abs(i) * f;
      if (i != 0) {
        num += std::abs(i) * f;
        den += f;
      }
    }
    ASSERT_NEAR(total, 1.0, 1e-12);
    ASSERT_NO_THROW(d.validate());
    ASSERT_EQ(expected_abs_notch(d), e);
    const double acc = accuracy(p);
    if (acc < 1.0) {
      ASSERT_EQ(conditional_notch(d), num / den);
      ASSERT_NEAR(expected_abs_notch(d), (1.0 - acc) * conditional_notch(d), 1e-12);
    } else {
      ASSERT_EQ(expected_abs_notch(d), 0.0);
    }
    ASSERT_EQ(expected_abs_notch(d) == 0.0, acc == 1.0);
  }
}

TEST(Metrics, PermutationInvariant) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_set(rng);
    const auto perm = random_permutation(p.size(), static_cast<std::uint64_t>(trial));
    PredictionSet q;
    for (const int k : perm) {
      q.truth.push_back(p.truth[static_cast<std::size_t>(k)]);
      q.predicted.push_back(p.predicted[static_cast<std::size_t>(k)]);
    }
    EXPECT_EQ(accuracy(p), accuracy(q));
    EXPECT_EQ(notch_frequency(p).freq, notch_frequency(q).freq);
    const auto a = precision_recall_f1_macro(p);
    const auto b = precision_recall_f1_macro(q);
    EXPECT_DOUBLE_EQ(a.f1, b.f1);
  }
}

TEST(Metrics, BinaryWorkedExamples) {
  const auto a = precision_recall_f1_binary(9, 1, 91);
  EXPECT_EQ(two_decimals(a.precision), "0.90");
  EXPECT_EQ(two_decimals(a.recall), "0.09");
  EXPECT_EQ(two_decimals(a.f1), "0.16");
  const auto b = precision_recall_f1_binary(5, 5, 1);
  EXPECT_EQ(two_decimals(b.precision), "0.50");
  EXPECT_EQ(two_decimals(b.recall), "0.83");
  EXPECT_NEAR(b.f1, 0.625, 1e-12);
  const auto c = precision_recall_f1_binary(4, 0, 0);
  EXPECT_EQ(c.precision, 1.0);
  EXPECT_EQ(c.recall, 1.0);
  EXPECT_EQ(c.f1, 1.0);
  EXPECT_EQ(precision_recall_f1_binary(0, 1, 1).f1, 0.0);
  EXPECT_ERRC(precision_recall_f1_binary(0, 0, 3), Errc::undefined);
  EXPECT_ERRC(precision_recall_f1_binary(0, 3, 0), Errc::undefined);
}

TEST(Metrics, MacroExample) {
  const auto m = precision_recall_f1_macro(PredictionSet({0, 0, 1, 1}, {0, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(m.precision, 5.0 / 6.0);
  EXPECT_DOUBLE_EQ(m.recall, 0.75);
  EXPECT_NEAR(m.f1, 0.7895, 5e-5);
}

TEST(Metrics, MacroUnpredictedClassCountsZero) {
  // Class 2 is present but never predicted; class 3 is predicted but absent.
  const auto m = precision_recall_f1_macro(PredictionSet({0, 2}, {0, 3}));
  EXPECT_DOUBLE_EQ(m.precision, 0.5);
  EXPECT_DOUBLE_EQ(m.recall, 0.5);
  EXPECT_DOUBLE_EQ(m.f1, 0.5);
}

TEST(Metrics, SummaryCsv) {
  const auto dir = test_util::scratch_dir();
  const auto s = evaluate(PredictionSet({6, 6, 8}, {6, 7, 8}));
  EXPECT_EQ(s.count, 3u);
  write_metrics_csv(s, dir / "m.csv");
  const auto text = test_util::slurp(dir / "m.csv");
  EXPECT_EQ(text.rfind("key,value\ncount,3\n", 0), 0u) << text;
  EXPECT_NE(text.find("conditional_notch,1\n"), std::string::npos) << text;
  EXPECT_NE(text.find("notch_1,"), std::string::npos);
  const auto perfect = evaluate(PredictionSet({1}, {1}));
  write_metrics_csv(perfect, dir / "p.csv");
  EXPECT_NE(test_util::slurp(dir / "p.csv").find("conditional_notch,n/a"), std::string::npos);
}
