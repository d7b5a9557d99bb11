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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace finimg {

// Paired true and predicted rating classes.
struct PredictionSet {
  std::vector<int> truth;
  std::vector<int> predicted;

  PredictionSet() = default;
  // Checks equal lengths and classes in 0..11.
  PredictionSet(std::vector<int> truth, std::vector<int> predicted);

  std::size_t size() const noexcept { return truth.size(); }
  bool empty() const noexcept { return truth.empty(); }
};

// F(i): share of pairs whose notch (predicted - true) equals i.
struct NotchDistribution {
  std::map<int, double> freq;

  // Throws validation unless frequencies sum to 1 (1e-12) on [-11, 11].
  void validate() const;
};

double accuracy(const PredictionSet& p);
NotchDistribution notch_frequency(const PredictionSet& p);
// E|Y| = sum |i| F(i).
double expected_abs_notch(const NotchDistribution& d);
// E[|Y| | Y != 0]; throws not_applicable when every prediction is correct.
double conditional_notch(const NotchDistribution& d);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

PrecisionRecall precision_recall_f1_binary(long long tp, long long fp, long long fn);
// Unweighted one-vs-rest mean over the classes present in the truth. A class
// that is never predicted contributes precision 0. F1 is taken from the macro
// precision and recall.
PrecisionRecall precision_recall_f1_macro(const PredictionSet& p);

struct MetricSummary {
  std::size_t count = 0;
  double accuracy = 0.0;
  double expected_notch = 0.0;
  std::optional<double> conditional_notch;  // empty when accuracy is 1
  PrecisionRecall macro;
  NotchDistribution notches;
};

MetricSummary evaluate(const PredictionSet& p);

// Flat key,value rows: count, accuracy, notch distances, macro scores, and
// one notch_<i> row per observed notch.
std::vector<std::pair<std::string, std::string>> metric_rows(const MetricSummary& m);
void write_metrics_csv(const MetricSummary& m, const std::filesystem::path& path);

}  // namespace finimg
