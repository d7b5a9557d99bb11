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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "finimg/csv.hpp"
#include "finimg/error.hpp"
#include "finimg/experiment.hpp"

namespace finimg::experiment {

namespace {

bool uses_image(Approach a) { return a != Approach::mlp && a != Approach::cnn1d; }

Method image_method(Approach a) {
  switch (a) {
    case Approach::sa: return Method::sa;
    case Approach::ra: return Method::ra;
    case Approach::cca: return Method::cca;
    case Approach::wcr: return Method::wcr;
    case Approach::bcr: return Method::bcr;
    case Approach::hva:
    case Approach::reduced_hva: return Method::hva;
    case Approach::hvr: return Method::hvr;
    case Approach::autoencoder_sa: return Method::sa;
    default: fail(Errc::invalid_argument, std::string(to_string(a)) + " has no image encoding");
  }
}

FeatureSchema code_schema(int code_dim) {
  std::vector<Feature> features;
  for (int i = 0; i < code_dim; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "code_%03d", i + 1);
    features.push_back({name, "code"});
  }
  return FeatureSchema(std::move(features), DatasetKind::generic);
}

int autoencoder_code_dim(const Encoder& e) {
  return static_cast<int>(e.autoencoder->spec().layer_shapes().at(nnet::kAutoencoderEncoderLayers - 1).at(0));
}

void attach_layout(Encoder& e) {
  if (!uses_image(e.method)) return;
  const Method m = image_method(e.method);
  if (e.method == Approach::autoencoder_sa) {
    const auto codes = code_schema(autoencoder_code_dim(e));
    e.layout = make_layout(ArrangementSpec::defaults(m, codes, e.arrangement_seed), codes);
  } else {
    e.layout = make_layout(ArrangementSpec::defaults(m, e.schema, e.arrangement_seed), e.schema);
  }
}

nnet::Tensor matrix_tensor(const Dataset& ds) {
  return nnet::Tensor({ds.size(), ds.schema().size()}, ds.value_matrix());
}

// Re-raises a stage failure with the method and run attached.
template <typename F>
auto labelled(Approach a, int run, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    fail(e.code(), "method " + std::string(to_string(a)) + " run " + std::to_string(run) + ": " + e.what());
  }
}

std::string accuracy_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

double summarize_or_single(const std::vector<double>& v) {
  if (v.empty()) fail(Errc::empty_set, "no runs to summarize");
  return v.size() == 1 ? v.front() : summarize(v).mean;
}

}  // namespace

nnet::NetworkSpec build_model(Approach a, const nnet::Shape& shape, const ModelConfig& m) {
  if (a == Approach::mlp) return nnet::build_mlp(static_cast<int>(shape.at(0)), m.mlp_hidden1, m.mlp_hidden2, m.mlp_dropout);
  if (a == Approach::cnn1d) return nnet::build_cnn1d(static_cast<int>(shape.at(1)), m.filters1, m.filters2);
  return nnet::build_cnn2d(static_cast<int>(shape.at(1)), static_cast<int>(shape.at(2)), m.filters1, m.filters2);
}

nnet::Shape Encoder::input_shape() const {
  if (layout) return {1, static_cast<std::size_t>(layout->rows), static_cast<std::size_t>(layout->cols)};
  if (method == Approach::cnn1d) return {1, schema.size()};
  return {schema.size()};
}

nnet::Tensor Encoder::encode(const Dataset& raw) const {
  if (raw.empty()) fail(Errc::empty_set, "nothing to encode");
  Dataset selected = kept.empty() ? raw : raw.select_features(kept, schema);
  if (!(selected.schema().size() == schema.size()))
    fail(Errc::schema_mismatch, "data has " + std::to_string(selected.schema().size()) +
                                    " features, encoder expects " + std::to_string(schema.size()));
  nnet::Tensor x = matrix_tensor(apply_standardizer(selected, standardizer));
  if (autoencoder) x = autoencoder->forward_prefix(x, nnet::kAutoencoderEncoderLayers);

  const std::size_t n = raw.size();
  if (layout) {
    const std::size_t cells = static_cast<std::size_t>(layout->rows) * static_cast<std::size_t>(layout->cols);
    const std::size_t d = x.size() / n;
    nnet::Tensor out({n, 1, static_cast<std::size_t>(layout->rows), static_cast<std::size_t>(layout->cols)});
    for (std::size_t i = 0; i < n; ++i)
      layout->render_into(std::span<const double>(x.data() + i * d, d), std::span<double>(out.data() + i * cells, cells));
    return out;
  }
  if (method == Approach::cnn1d) x.reshape({n, 1, schema.size()});
  return x;
}

Encoder fit_encoder(const Dataset& train_raw, Approach method, std::uint64_t arrangement_seed,
                    const ExperimentConfig& config, std::uint64_t train_seed) {
  if (train_raw.empty()) fail(Errc::empty_set, "training split is empty");
  Encoder e;
  e.method = method;
  e.arrangement_seed = arrangement_seed;
  e.schema = train_raw.schema();
  Dataset base = train_raw;
  if (method == Approach::reduced_hva) {
    // Missing counts come from the training split only.
    auto reduced = reduce_features(train_raw, largest_power_of_four_at_most(static_cast<int>(train_raw.schema().size())));
    e.kept = std::move(reduced.kept);
    e.schema = std::move(reduced.schema);
    base = std::move(reduced.dataset);
  }
  e.standardizer = fit_standardizer(base);

  if (method == Approach::autoencoder_sa) {
    const nnet::Tensor x = matrix_tensor(apply_standardizer(base, e.standardizer));
    const auto spec = nnet::build_autoencoder(static_cast<int>(e.schema.size()), config.model.autoencoder_code,
                                              config.model.autoencoder_hidden);
    nnet::TrainConfig tc = config.train;
    tc.seed = derive_seed(train_seed, 7);
    if (config.model.autoencoder_epochs >= 0) tc.epochs = config.model.autoencoder_epochs;
    nnet::TrainingData data{x, {}, x};
    e.autoencoder = nnet::train(spec, data, tc).network;
  }
  attach_layout(e);
  return e;
}

std::vector<double> MethodResult::accuracies() const {
  std::vector<double> out;
  for (const auto& r : runs) out.push_back(r.metrics.accuracy);
  return out;
}

RunRecord run_once(const TrainTestSplit& split, Approach method, const ExperimentConfig& config,
                   std::uint64_t arrangement_seed, std::uint64_t train_seed, int run) {
  return labelled(method, run, [&] {
    const Encoder enc = fit_encoder(split.train, method, arrangement_seed, config, train_seed);
    nnet::TrainingData data{enc.encode(split.train), split.train.labels(), {}};
    nnet::TrainConfig tc = config.train;
    tc.seed = train_seed;
    const auto trained = nnet::train(build_model(method, enc.input_shape(), config.model), data, tc);
    const auto predicted = nnet::predict_classes(trained.network, enc.encode(split.test));
    RunRecord r;
    r.method = method;
    r.run = run;
    r.arrangement_seed = arrangement_seed;
    r.train_seed = train_seed;
    r.metrics = evaluate(PredictionSet(split.test.labels(), predicted));
    return r;
  });
}

MethodResult run_method(const ExperimentConfig& config, const Dataset& ds, Approach method) {
  const TrainTestSplit split = out_of_time_split(ds, config.test_year);
  if (split.train.empty())
    fail(Errc::empty_set, "no training observations before " + std::to_string(config.test_year));
  MethodResult result;
  result.method = method;
  const bool randomized = is_randomized(method);
  const int runs = randomized ? config.randomization_runs : (config.pairwise ? config.training_seeds : 1);
  for (int r = 0; r < runs; ++r) {
    const std::uint64_t s = config.seed + static_cast<std::uint64_t>(r);
    result.runs.push_back(run_once(split, method, config, randomized ? s : config.seed, s, r));
    if (config.progress)
      config.progress(std::string(to_string(method)) + " run " + std::to_string(r + 1) + "/" +
                      std::to_string(runs) + " accuracy " + accuracy_text(result.runs.back().metrics.accuracy));
  }
  return result;
}

ReducedPaddingRow reduced_padding_row(const std::string& label, const Dataset& ds, const MethodResult& hva,
                                      const MethodResult& reduced) {
  ReducedPaddingRow row;
  row.data_label = label;
  row.original_features = static_cast<int>(ds.schema().size());
  row.reduced_features = largest_power_of_four_at_most(row.original_features);
  const GridLayout layout = hilbert_layout(row.reduced_features);
  row.grid_side = layout.rows;
  row.zero_pad_cells = static_cast<std::size_t>(std::count(layout.provenance.begin(), layout.provenance.end(), kZeroPad));
  row.original_accuracy = summarize_or_single(hva.accuracies());
  row.reduced_accuracy = summarize_or_single(reduced.accuracies());
  return row;
}

ReducedPaddingRow run_reduced_padding_study(const ExperimentConfig& config, const Dataset& ds,
                                            const std::string& label) {
  const auto hva = run_method(config, ds, Approach::hva);
  const auto reduced = run_method(config, ds, Approach::reduced_hva);
  return reduced_padding_row(label, ds, hva, reduced);
}

AutoencoderRow run_autoencoder_study(const ExperimentConfig& config, const Dataset& fundamentals,
                                     const Dataset* ratios) {
  AutoencoderRow row;
  row.code_dim = config.model.autoencoder_code;
  row.autoencoder_accuracy = summarize_or_single(run_method(config, fundamentals, Approach::autoencoder_sa).accuracies());
  row.fundamental_sa = summarize_or_single(run_method(config, fundamentals, Approach::sa).accuracies());
  if (ratios) row.ratio_sa = summarize_or_single(run_method(config, *ratios, Approach::sa).accuracies());
  return row;
}

TrainedModel train_model(const ExperimentConfig& config, const Dataset& ds, Approach method) {
  const TrainTestSplit split = out_of_time_split(ds, config.test_year);
  if (split.train.empty())
    fail(Errc::empty_set, "no training observations before " + std::to_string(config.test_year));
  return labelled(method, 0, [&] {
    TrainedModel m{fit_encoder(split.train, method, config.seed, config, config.seed), {}};
    nnet::TrainingData data{m.encoder.encode(split.train), split.train.labels(), {}};
    nnet::TrainConfig tc = config.train;
    tc.seed = config.seed;
    m.network = nnet::train(build_model(method, m.encoder.input_shape(), config.model), data, tc);
    return m;
  });
}

MetricSummary evaluate_model(const TrainedModel& model, const Dataset& test_raw) {
  const auto predicted = nnet::predict_classes(model.network.network, model.encoder.encode(test_raw));
  return evaluate(PredictionSet(test_raw.labels(), predicted));
}

nnet::Checkpoint to_checkpoint(const TrainedModel& model) {
  nnet::Checkpoint c = nnet::make_checkpoint(model.network);
  const Encoder& e = model.encoder;
  c.metadata["method"] = std::string(to_string(e.method));
  c.metadata["arrangement_seed"] = std::to_string(e.arrangement_seed);
  std::vector<double> mean, sd;
  for (const auto& f : e.standardizer.features) {
    mean.push_back(f.mean);
    sd.push_back(f.stddev);
  }
  c.arrays["standardizer_mean"] = mean;
  c.arrays["standardizer_stddev"] = sd;
  if (!e.kept.empty()) c.arrays["kept_features"] = std::vector<double>(e.kept.begin(), e.kept.end());
  if (e.autoencoder) {
    c.metadata["autoencoder_code"] = std::to_string(autoencoder_code_dim(e));
    const auto hidden = e.autoencoder->spec().layer_shapes().at(0).at(0);
    c.metadata["autoencoder_hidden"] = std::to_string(hidden);
    const auto params = e.autoencoder->parameters();
    for (std::size_t k = 0; k < params.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "autoencoder_%02zu", k);
      c.arrays[name] = params[k]->to_vector();
    }
  }
  return c;
}

TrainedModel from_checkpoint(const nnet::Checkpoint& c, const FeatureSchema& schema) {
  auto meta = [&](const char* key) -> const std::string& {
    const auto it = c.metadata.find(key);
    if (it == c.metadata.end()) fail(Errc::parse, std::string("checkpoint lacks metadata '") + key + "'");
    return it->second;
  };
  auto array = [&](const char* key) -> const std::vector<double>& {
    const auto it = c.arrays.find(key);
    if (it == c.arrays.end()) fail(Errc::parse, std::string("checkpoint lacks array '") + key + "'");
    return it->second;
  };
  auto integer = [&](const char* key) {
    const auto v = csv::parse_int(meta(key));
    if (!v || *v < 0) fail(Errc::parse, std::string("checkpoint metadata '") + key + "' is not a count");
    return *v;
  };

  TrainedModel m;
  Encoder& e = m.encoder;
  const auto method = parse_approach(meta("method"));
  if (!method) fail(Errc::parse, "checkpoint names unknown method '" + meta("method") + "'");
  e.method = *method;
  e.arrangement_seed = static_cast<std::uint64_t>(integer("arrangement_seed"));
  e.schema = schema;
  if (c.arrays.count("kept_features")) {
    for (const double v : array("kept_features")) {
      if (!(v >= 0.0 && v < static_cast<double>(schema.size())) || v != std::floor(v))
        fail(Errc::schema_mismatch, "checkpoint keeps a feature outside the schema");
      e.kept.push_back(static_cast<int>(v));
    }
    e.schema = schema.subset(e.kept);
  }
  const auto& mean = array("standardizer_mean");
  const auto& sd = array("standardizer_stddev");
  if (mean.size() != e.schema.size() || sd.size() != e.schema.size())
    fail(Errc::schema_mismatch, "checkpoint was trained on " + std::to_string(mean.size()) +
                                    " features, schema has " + std::to_string(e.schema.size()));
  for (std::size_t j = 0; j < mean.size(); ++j) e.standardizer.features.push_back({mean[j], sd[j]});

  if (e.method == Approach::autoencoder_sa) {
    nnet::Network ae(nnet::build_autoencoder(static_cast<int>(e.schema.size()), static_cast<int>(integer("autoencoder_code")),
                                             static_cast<int>(integer("autoencoder_hidden"))));
    auto params = ae.parameters();
    for (std::size_t k = 0; k < params.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "autoencoder_%02zu", k);
      const auto& values = array(name);
      if (values.size() != params[k]->size()) fail(Errc::shape_mismatch, std::string("checkpoint array ") + name + " has the wrong size");
      *params[k] = nnet::Tensor(params[k]->shape(), values);
    }
    e.autoencoder = std::move(ae);
  }
  attach_layout(e);
  m.network = nnet::restore(c);
  if (m.network.network.spec().input_shape != e.input_shape())
    fail(Errc::shape_mismatch, "checkpoint network input " + nnet::shape_string(m.network.network.spec().input_shape) +
                                   " does not match the encoding " + nnet::shape_string(e.input_shape()));
  return m;
}

nnet::GridSearchResult run_grid_search(const ExperimentConfig& config, const Dataset& ds, Approach method,
                                       std::span<const int> grid) {
  const TrainTestSplit split = out_of_time_split(ds, config.test_year);
  if (split.train.empty())
    fail(Errc::empty_set, "no training observations before " + std::to_string(config.test_year));
  const Encoder enc = fit_encoder(split.train, method, config.seed, config, config.seed);
  const nnet::TrainingData train{enc.encode(split.train), split.train.labels(), {}};
  const nnet::TrainingData validation{enc.encode(split.test), split.test.labels(), {}};
  const auto shape = enc.input_shape();
  const auto builder = [&](int n1, int n2) {
    ModelConfig m = config.model;
    if (method == Approach::mlp) {
      m.mlp_hidden1 = n1;
      m.mlp_hidden2 = n2;
    } else {
      m.filters1 = n1;
      m.filters2 = n2;
    }
    return build_model(method, shape, m);
  };
  nnet::TrainConfig tc = config.train;
  tc.seed = config.seed;
  return nnet::grid_search(builder, grid, train, validation, tc);
}

void write_grid_search_csv(const nnet::GridSearchResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write " + path.string());
  csv::write_row(out, {"neurons1", "neurons2", "parameters", "train_accuracy", "validation_accuracy", "best", "error"});
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& r = result.rows[i];
    csv::write_row(out, {std::to_string(r.neurons1), std::to_string(r.neurons2), std::to_string(r.parameters),
                         r.error ? "" : csv::format_double(r.train_accuracy),
                         r.error ? "" : csv::format_double(r.validation_accuracy),
                         result.best && *result.best == i ? "1" : "0", r.error.value_or("")});
  }
  if (!out) fail(Errc::io, "failed writing " + path.string());
}

}  // namespace finimg::experiment
