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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finimg/dataset.hpp"
#include "finimg/encoding.hpp"
#include "finimg/metrics.hpp"
#include "finimg/nnet/checkpoint.hpp"
#include "finimg/nnet/network.hpp"
#include "finimg/nnet/spec.hpp"
#include "finimg/nnet/train.hpp"
#include "finimg/stats.hpp"
#include "finimg/synthetic.hpp"

namespace finimg::experiment {

// A complete input pipeline plus model family. The seven image encodings
// feed a 2D CNN; mlp and cnn1d use the standardized vector directly.
enum class Approach { mlp, cnn1d, sa, ra, cca, wcr, bcr, hva, hvr, reduced_hva, autoencoder_sa };

std::string_view to_string(Approach a) noexcept;
// Row label used in reports.
std::string_view display_name(Approach a) noexcept;
std::optional<Approach> parse_approach(std::string_view text) noexcept;
std::vector<Approach> parse_approaches(std::string_view comma_list);
bool is_randomized(Approach a) noexcept;
// Randomized controls a deterministic encoding is tested against.
std::vector<Approach> controls_of(Approach a);

enum class ReportFormat { csv, markdown };
std::optional<ReportFormat> parse_format(std::string_view text) noexcept;

// Either a CSV file plus schema file, or a synthetic specification.
struct DataSource {
  std::optional<std::filesystem::path> path;
  std::optional<std::filesystem::path> schema;
  std::optional<SyntheticSpec> synthetic;

  bool configured() const noexcept { return path.has_value() || synthetic.has_value(); }
  Dataset load() const;
};

struct ModelConfig {
  int mlp_hidden1 = 128;
  int mlp_hidden2 = 128;
  double mlp_dropout = 0.3;
  int filters1 = 64;
  int filters2 = 32;
  int autoencoder_code = 69;
  int autoencoder_hidden = 128;
  int autoencoder_epochs = -1;  // negative: same as train.epochs
};

struct ExperimentConfig {
  DataSource data;
  // Optional financial-ratio dataset reported as a second table.
  std::optional<DataSource> ratio_data;
  int test_year = 0;
  std::vector<Approach> methods;
  int randomization_runs = 30;
  // Training seeds per deterministic method when pairwise is set.
  int training_seeds = 30;
  bool pairwise = false;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  nnet::TrainConfig train;
  ModelConfig model;
  std::filesystem::path output_dir = "out";
  ReportFormat format = ReportFormat::markdown;
  // Called with one line per finished run; not part of the configuration.
  std::function<void(const std::string&)> progress;

  void validate() const;

  // JSON object mirroring the fields above; unknown keys are rejected.
  static ExperimentConfig parse(std::string_view json_text);
  static ExperimentConfig load(const std::filesystem::path& path);
  // Canonical JSON of every field that affects results (not output_dir or
  // format).
  std::string canonical_json() const;
  // FNV-1a 64 of canonical_json(), as 16 hex digits.
  std::string hash() const;
};

nnet::NetworkSpec build_model(Approach a, const nnet::Shape& input_shape, const ModelConfig& m);

// Everything fitted on the training split that turns raw observations into
// network inputs.
struct Encoder {
  Approach method = Approach::sa;
  std::uint64_t arrangement_seed = 0;
  std::vector<int> kept;  // reduced_hva: surviving feature columns
  FeatureSchema schema;   // after any reduction
  StandardizationParams standardizer;
  std::optional<nnet::Network> autoencoder;
  std::optional<GridLayout> layout;

  nnet::Shape input_shape() const;
  // (N, input_shape...) tensor for raw observations of the original schema.
  nnet::Tensor encode(const Dataset& raw) const;
};

// `train_seed` seeds the auto-encoder when one is needed.
Encoder fit_encoder(const Dataset& train_raw, Approach method, std::uint64_t arrangement_seed,
                    const ExperimentConfig& config, std::uint64_t train_seed);

struct RunRecord {
  Approach method = Approach::sa;
  int run = 0;
  std::uint64_t arrangement_seed = 0;
  std::uint64_t train_seed = 0;
  MetricSummary metrics;
};

struct MethodResult {
  Approach method = Approach::sa;
  std::vector<RunRecord> runs;

  std::vector<double> accuracies() const;
};

// Split, standardize, encode, train, predict and score one pipeline.
RunRecord run_once(const TrainTestSplit& split, Approach method, const ExperimentConfig& config,
                   std::uint64_t arrangement_seed, std::uint64_t train_seed, int run);

// Randomized methods run randomization_runs times with seeds seed+0.. for
// both the arrangement and training. Deterministic methods run once, or
// training_seeds times in pairwise mode.
MethodResult run_method(const ExperimentConfig& config, const Dataset& ds, Approach method);

struct ReducedPaddingRow {
  std::string data_label;
  int original_features = 0;
  int reduced_features = 0;
  int grid_side = 0;
  std::size_t zero_pad_cells = 0;
  double original_accuracy = 0.0;  // HVA on all features
  double reduced_accuracy = 0.0;
};

ReducedPaddingRow reduced_padding_row(const std::string& label, const Dataset& ds,
                                      const MethodResult& hva, const MethodResult& reduced);
ReducedPaddingRow run_reduced_padding_study(const ExperimentConfig& config, const Dataset& ds,
                                            const std::string& label);

struct AutoencoderRow {
  int code_dim = 0;
  double autoencoder_accuracy = 0.0;
  std::optional<double> fundamental_sa;
  std::optional<double> ratio_sa;
};

AutoencoderRow run_autoencoder_study(const ExperimentConfig& config, const Dataset& fundamentals,
                                     const Dataset* ratios);

struct ControlTest {
  Approach control = Approach::ra;
  double reference = 0.0;
  double control_mean = 0.0;
  TTest test;
};

struct ReportRow {
  Approach method = Approach::sa;
  std::size_t runs = 0;
  double accuracy = 0.0;
  std::optional<double> accuracy_se;
  std::optional<double> notch;  // conditional notch distance
  std::optional<double> notch_se;
  bool significant = false;
  std::vector<ControlTest> tests;
};

struct ReportTable {
  std::string title;
  std::vector<ReportRow> rows;
  std::vector<MethodResult> results;
  std::optional<PairwiseComparison> pairwise;
};

struct ExperimentReport {
  std::string config_hash;
  std::uint64_t seed = 0;
  int test_year = 0;
  double alpha = 0.05;
  std::vector<ReportTable> tables;
  std::vector<ReducedPaddingRow> reduced;
  std::optional<AutoencoderRow> autoencoder;
};

// Table rows from finished results, including control tests and stars.
ReportTable summarize_results(std::string title, std::vector<MethodResult> results,
                              const ExperimentConfig& config);

// The full protocol over every configured dataset.
ExperimentReport compare(const ExperimentConfig& config);

// "0.348 (0.007)" / "0.390*".
std::string format_cell(double value, std::optional<double> se, bool star = false);

// report.md or report.csv, plus runs.csv, significance.csv and one
// pairwise_<n>.csv per table with a pairwise comparison.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, ReportFormat format,
                                               const std::filesystem::path& dir);
std::string render_markdown(const ExperimentReport& report);
std::string render_csv(const ExperimentReport& report);

// A trained single pipeline that can be saved and evaluated later.
struct TrainedModel {
  Encoder encoder;
  nnet::TrainedNetwork network;
};

TrainedModel train_model(const ExperimentConfig& config, const Dataset& ds, Approach method);
MetricSummary evaluate_model(const TrainedModel& model, const Dataset& test_raw);
nnet::Checkpoint to_checkpoint(const TrainedModel& model);
// `schema` is the schema of the raw data the model was trained on.
TrainedModel from_checkpoint(const nnet::Checkpoint& checkpoint, const FeatureSchema& schema);

// Tunes the two width parameters of the approach's network (hidden sizes for
// mlp, filter counts otherwise) on the test year used as validation.
nnet::GridSearchResult run_grid_search(const ExperimentConfig& config, const Dataset& ds,
                                       Approach method, std::span<const int> grid);
void write_grid_search_csv(const nnet::GridSearchResult& result, const std::filesystem::path& path);

}  // namespace finimg::experiment
