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

#include "finimg/metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "finimg/csv.hpp"
#include "finimg/error.hpp"
#include "finimg/rating.hpp"

namespace finimg {

namespace {

void require_pairs(const PredictionSet& p) {
  if (p.empty()) fail(Errc::empty_set, "prediction set is empty");
  if (p.truth.size() != p.predicted.size())
    fail(Errc::shape_mismatch, "prediction set has unequal truth and prediction counts");
}

}  // namespace

PredictionSet::PredictionSet(std::vector<int> t, std::vector<int> p)
    : truth(std::move(t)), predicted(std::move(p)) {
  if (truth.size() != predicted.size())
    fail(Errc::shape_mismatch, std::to_string(truth.size()) + " true classes but " +
                                   std::to_string(predicted.size()) + " predictions");
  for (const auto* v : {&truth, &predicted})
    for (const int c : *v)
      if (c < 0 || c >= kRatingClasses)
        fail(Errc::out_of_range, "class " + std::to_string(c) + " outside 0..11");
}

void NotchDistribution::validate() const {
  double sum = 0.0;
  for (const auto& [i, f] : freq) {
    if (i < -(kRatingClasses - 1) || i > kRatingClasses - 1)
      fail(Errc::validation, "notch " + std::to_string(i) + " outside [-11, 11]");
    if (!(f >= 0.0 && f <= 1.0)) fail(Errc::validation, "notch frequency outside [0, 1]");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-12) fail(Errc::validation, "notch frequencies do not sum to 1");
}

double accuracy(const PredictionSet& p) {
  require_pairs(p);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < p.size(); ++k) hits += p.truth[k] == p.predicted[k] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(p.size());
}

NotchDistribution notch_frequency(const PredictionSet& p) {
  require_pairs(p);
  std::map<int, std::size_t> counts;
  for (std::size_t k = 0; k < p.size(); ++k) ++counts[p.predicted[k] - p.truth[k]];
  NotchDistribution d;
  for (const auto& [i, c] : counts) d.freq[i] = static_cast<double>(c) / static_cast<double>(p.size());
  return d;
}

double expected_abs_notch(const NotchDistribution& d) {
  double e = 0.0;
  for (const auto& [i, f] : d.freq) e += std::abs(i) * f;
  return e;
}

double conditional_notch(const NotchDistribution& d) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& [i, f] : d.freq) {
    if (i == 0) continue;
    num += std::abs(i) * f;
    den += f;
  }
  if (!(den > 0.0))
    fail(Errc::not_applicable, "conditional notch distance is undefined when every prediction is correct");
  return num / den;
}

PrecisionRecall precision_recall_f1_binary(long long tp, long long fp, long long fn) {
  if (tp < 0 || fp < 0 || fn < 0) fail(Errc::invalid_argument, "counts must be non-negative");
  if (tp + fp == 0) fail(Errc::undefined, "precision is undefined without predicted positives");
  if (tp + fn == 0) fail(Errc::undefined, "recall is undefined without actual positives");
  PrecisionRecall r;
  r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  r.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

PrecisionRecall precision_recall_f1_macro(const PredictionSet& p) {
  require_pairs(p);
  std::vector<long long> tp(kRatingClasses, 0), pred(kRatingClasses, 0), actual(kRatingClasses, 0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    ++actual[static_cast<std::size_t>(p.truth[k])];
    ++pred[static_cast<std::size_t>(p.predicted[k])];
    if (p.truth[k] == p.predicted[k]) ++tp[static_cast<std::size_t>(p.truth[k])];
  }
  double psum = 0.0;
  double rsum = 0.0;
  int present = 0;
  for (std::size_t c = 0; c < tp.size(); ++c) {
    if (actual[c] == 0) continue;
    ++present;
    psum += pred[c] > 0 ? static_cast<double>(tp[c]) / static_cast<double>(pred[c]) : 0.0;
    rsum += static_cast<double>(tp[c]) / static_cast<double>(actual[c]);
  }
  PrecisionRecall r;
  r.precision = psum / present;
  r.recall = rsum / present;
  r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

MetricSummary evaluate(const PredictionSet& p) {
  MetricSummary m;
  m.count = p.size();
  m.accuracy = accuracy(p);
  m.notches = notch_frequency(p);
  m.expected_notch = expected_abs_notch(m.notches);
  if (m.accuracy < 1.0) m.conditional_notch = conditional_notch(m.notches);
  m.macro = precision_recall_f1_macro(p);
  return m;
}

std::vector<std::pair<std::string, std::string>> metric_rows(const MetricSummary& m) {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("count", std::to_string(m.count));
  rows.emplace_back("accuracy", csv::format_double(m.accuracy));
  rows.emplace_back("expected_notch", csv::format_double(m.expected_notch));
  rows.emplace_back("conditional_notch",
                    m.conditional_notch ? csv::format_double(*m.conditional_notch) : std::string("n/a"));
  rows.emplace_back("macro_precision", csv::format_double(m.macro.precision));
  rows.emplace_back("macro_recall", csv::format_double(m.macro.recall));
  rows.emplace_back("macro_f1", csv::format_double(m.macro.f1));
  for (const auto& [i, f] : m.notches.freq) rows.emplace_back("notch_" + std::to_string(i), csv::format_double(f));
  return rows;
}

void write_metrics_csv(const MetricSummary& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write " + path.string());
  out << "key,value\n";
  for (const auto& [k, v] : metric_rows(m)) out << k << ',' << v << '\n';
  if (!out) fail(Errc::io, "failed writing " + path.string());
}

}  // namespace finimg
