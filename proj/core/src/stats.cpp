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

#include "finimg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "finimg/csv.hpp"
#include "finimg/error.hpp"

namespace finimg {

namespace {

// Continued fraction for I_x(a, b), modified Lentz.
double beta_fraction(double x, double a, double b) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

void require_samples(std::span<const double> s, const char* what) {
  if (s.size() < 2)
    fail(Errc::insufficient_samples, std::string(what) + " needs at least 2 samples, got " +
                                         std::to_string(s.size()));
}

}  // namespace

SampleSummary summarize(std::span<const double> samples) {
  require_samples(samples, "summary");
  SampleSummary s;
  s.n = samples.size();
  // Constant samples: exact mean, zero spread.
  if (std::all_of(samples.begin(), samples.end(), [&](double v) { return v == samples.front(); })) {
    s.mean = samples.front();
    return s;
  }
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(s.n);
  double ss = 0.0;
  for (const double v : samples) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
  s.standard_error = s.stddev / std::sqrt(static_cast<double>(s.n));
  return s;
}

double incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) fail(Errc::invalid_argument, "incomplete beta needs positive shape parameters");
  if (!(x >= 0.0 && x <= 1.0)) fail(Errc::invalid_argument, "incomplete beta argument outside [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * beta_fraction(x, a, b) / a;
  return 1.0 - std::exp(log_front) * beta_fraction(1.0 - x, b, a) / b;
}

double t_cdf(double t, double df) {
  if (!(df > 0.0)) fail(Errc::invalid_argument, "degrees of freedom must be positive");
  if (std::isnan(t)) fail(Errc::invalid_argument, "t statistic is NaN");
  if (t == 0.0) return 0.5;
  if (std::isinf(t)) return t > 0.0 ? 1.0 : 0.0;
  // Tail mass P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2).
  const double x = df / (df + t * t);
  const double tail = 0.5 * incomplete_beta(x, 0.5 * df, 0.5);
  return t > 0.0 ? 1.0 - tail : tail;
}

TTest one_sample_t_greater(std::span<const double> samples, double reference) {
  const auto s = summarize(samples);
  if (s.standard_error == 0.0)
    fail(Errc::zero_variance, "one-sample t-test is undefined for constant samples");
  TTest r;
  r.df = static_cast<double>(s.n - 1);
  r.t = (reference - s.mean) / s.standard_error;
  r.p = t_cdf(-r.t, r.df);
  return r;
}

TTest welch_t_test(std::span<const double> a, std::span<const double> b) {
  const auto sa = summarize(a);
  const auto sb = summarize(b);
  const double va = sa.standard_error * sa.standard_error;
  const double vb = sb.standard_error * sb.standard_error;
  TTest r;
  if (va + vb == 0.0) {
    // Both constant: equal means are indistinguishable, different means are
    // separated with certainty.
    r.t = sa.mean == sb.mean ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), sa.mean - sb.mean);
    r.p = sa.mean == sb.mean ? 1.0 : 0.0;
    r.df = static_cast<double>(sa.n + sb.n - 2);
    return r;
  }
  r.t = (sa.mean - sb.mean) / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) /
         (va * va / static_cast<double>(sa.n - 1) + vb * vb / static_cast<double>(sb.n - 1));
  r.p = std::min(1.0, 2.0 * t_cdf(-std::abs(r.t), r.df));
  return r;
}

PairwiseComparison pairwise_t_bonferroni(const LabeledSamples& groups, double alpha) {
  const std::size_t k = groups.size();
  if (k < 2) fail(Errc::insufficient_samples, "pairwise comparison needs at least 2 groups");
  if (!(alpha > 0.0 && alpha < 1.0)) fail(Errc::invalid_argument, "alpha must be in (0, 1)");
  PairwiseComparison c;
  std::vector<double> means(k);
  for (std::size_t i = 0; i < k; ++i) {
    c.labels.push_back(groups[i].first);
    means[i] = summarize(groups[i].second).mean;
  }
  c.comparisons = k * (k - 1) / 2;
  c.threshold = alpha / static_cast<double>(c.comparisons);
  c.p_values.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      c.p_values[i][j] = c.p_values[j][i] = welch_t_test(groups[i].second, groups[j].second).p;

  std::vector<std::size_t> rank(k);
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return means[a] > means[b]; });

  // reach[i]: furthest rank position that must share a group with position i.
  std::vector<std::size_t> reach(k);
  for (std::size_t i = 0; i < k; ++i) {
    reach[i] = i;
    for (std::size_t j = i + 1; j < k; ++j)
      if (!(c.p_values[rank[i]][rank[j]] <= c.threshold)) reach[i] = j;
  }
  std::size_t start = 0;
  std::size_t end = reach[0];
  for (std::size_t i = 0; i < k; ++i) {
    c.grouping.order.push_back(c.labels[rank[i]]);
    end = std::max(end, reach[i]);
    if (i == end) {
      std::vector<std::string> g;
      for (std::size_t m = start; m <= end; ++m) g.push_back(c.labels[rank[m]]);
      c.grouping.groups.push_back(std::move(g));
      start = i + 1;
      if (start < k) end = reach[start];
    }
  }
  return c;
}

std::string render_grouping(const RankGrouping& g) {
  std::string out;
  for (const auto& group : g.groups) {
    if (!out.empty()) out += ' ';
    out += '[';
    for (std::size_t i = 0; i < group.size(); ++i) {
      if (i) out += ' ';
      out += group[i];
    }
    out += ']';
  }
  return out;
}

void write_pairwise_csv(const PairwiseComparison& c, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write " + path.string());
  std::vector<std::string> header{"method"};
  header.insert(header.end(), c.labels.begin(), c.labels.end());
  csv::write_row(out, header);
  for (std::size_t i = 0; i < c.labels.size(); ++i) {
    std::vector<std::string> row{c.labels[i]};
    for (const double p : c.p_values[i]) row.push_back(csv::format_double(p));
    csv::write_row(out, row);
  }
  out << "# threshold," << csv::format_double(c.threshold) << '\n';
  out << "# grouping," << render_grouping(c.grouping) << '\n';
  if (!out) fail(Errc::io, "failed writing " + path.string());
}

}  // namespace finimg
