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

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace finimg {

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;          // n - 1 denominator
  double standard_error = 0.0;  // stddev / sqrt(n)
};

SampleSummary summarize(std::span<const double> samples);

struct TTest {
  double t = 0.0;
  double p = 0.0;
  double df = 0.0;
};

// H1: reference > mean(samples). t = (reference - mean) / stderr with n - 1
// degrees of freedom; p is the upper tail.
TTest one_sample_t_greater(std::span<const double> samples, double reference);

// Welch unequal-variance test, two-sided.
TTest welch_t_test(std::span<const double> a, std::span<const double> b);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double x, double a, double b);
// P(T <= t) for Student's t with df degrees of freedom.
double t_cdf(double t, double df);

// Labels in rank order (highest mean first), split into contiguous groups
// whose members are not significantly different.
struct RankGrouping {
  std::vector<std::string> order;
  std::vector<std::vector<std::string>> groups;
};

struct PairwiseComparison {
  std::vector<std::string> labels;  // input order
  std::vector<std::vector<double>> p_values;  // symmetric, 1 on the diagonal
  std::size_t comparisons = 0;
  double threshold = 0.0;  // alpha / comparisons
  RankGrouping grouping;
};

using LabeledSamples = std::vector<std::pair<std::string, std::vector<double>>>;

// Welch test for every pair with a Bonferroni threshold. Any two methods whose
// adjusted comparison is not significant end up in the same group, together
// with everything ranked between them.
PairwiseComparison pairwise_t_bonferroni(const LabeledSamples& groups, double alpha = 0.05);

// "[A B] [C]" in rank order.
std::string render_grouping(const RankGrouping& g);
void write_pairwise_csv(const PairwiseComparison& c, const std::filesystem::path& path);

}  // namespace finimg
