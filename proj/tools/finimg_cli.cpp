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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finimg/csv.hpp"
#include "finimg/dataset.hpp"
#include "finimg/encoding.hpp"
#include "finimg/error.hpp"
#include "finimg/experiment.hpp"
#include "finimg/grid_io.hpp"
#include "finimg/nnet/checkpoint.hpp"
#include "finimg/synthetic.hpp"

namespace fs = std::filesystem;
using namespace finimg;
using namespace finimg::experiment;

namespace {

// Flags shared by the commands that run pipelines. Unset flags leave the
// config file (or built-in default) value alone.
struct Overrides {
  std::string config;
  std::string data, schema, ratio_data, ratio_schema;
  std::optional<int> test_year, runs, training_seeds, epochs, batch;
  std::optional<std::string> methods, format, filters;
  std::optional<std::uint64_t> seed;
  std::optional<double> lr;
  bool pairwise = false;

  void add_to(CLI::App* app, bool with_methods) {
    app->add_option("--config", config, "JSON experiment config; flags override its values");
    app->add_option("--data", data, "Data CSV (id,year,quarter,rating,features...)");
    app->add_option("--schema", schema, "Schema CSV (name,section)");
    app->add_option("--test-year", test_year, "Out-of-time test year; training uses earlier years");
    app->add_option("--seed", seed, "Base seed");
    app->add_option("--epochs", epochs, "Training epochs");
    app->add_option("--lr", lr, "Learning rate");
    app->add_option("--batch", batch, "Mini-batch size");
    app->add_option("--filters", filters, "Network widths as n1,n2 (conv filters, or MLP hidden units)");
    if (with_methods) {
      app->add_option("--methods", methods, "Comma-separated: mlp,cnn1d,sa,ra,cca,wcr,bcr,hva,hvr,reduced_hva,autoencoder_sa");
      app->add_option("--runs", runs, "Randomization runs per randomized method");
      app->add_option("--training-seeds", training_seeds, "Training seeds per deterministic method (pairwise mode)");
      app->add_flag("--pairwise", pairwise, "Retrain deterministic methods over training seeds and rank all methods");
      app->add_option("--ratio-data", ratio_data, "Financial-ratio data CSV for a second table");
      app->add_option("--ratio-schema", ratio_schema, "Schema CSV for --ratio-data");
      app->add_option("--format", format, "Report format: markdown or csv");
    }
  }

  ExperimentConfig build() const {
    ExperimentConfig c = config.empty() ? ExperimentConfig{} : ExperimentConfig::load(config);
    if (!data.empty()) {
      c.data.path = data;
      c.data.synthetic.reset();
    }
    if (!schema.empty()) c.data.schema = schema;
    if (!ratio_data.empty()) {
      if (!c.ratio_data) c.ratio_data.emplace();
      c.ratio_data->path = ratio_data;
      c.ratio_data->synthetic.reset();
    }
    if (!ratio_schema.empty()) {
      if (!c.ratio_data) c.ratio_data.emplace();
      c.ratio_data->schema = ratio_schema;
    }
    if (test_year) c.test_year = *test_year;
    if (methods) c.methods = parse_approaches(*methods);
    if (runs) c.randomization_runs = *runs;
    if (training_seeds) c.training_seeds = *training_seeds;
    if (pairwise) c.pairwise = true;
    if (seed) c.seed = *seed;
    if (epochs) c.train.epochs = *epochs;
    if (lr) c.train.learning_rate = *lr;
    if (batch) c.train.batch_size = *batch;
    if (filters) {
      std::vector<int> w;
      for (const auto& part : csv::split_line(*filters, 0)) {
        const auto v = csv::parse_int(csv::trim(part));
        if (!v) fail(Errc::validation, "--filters expects two integers, got '" + *filters + "'");
        w.push_back(static_cast<int>(*v));
      }
      if (w.size() != 2) fail(Errc::validation, "--filters expects two integers, got '" + *filters + "'");
      c.model.filters1 = c.model.mlp_hidden1 = w[0];
      c.model.filters2 = c.model.mlp_hidden2 = w[1];
    }
    if (format) {
      const auto f = parse_format(*format);
      if (!f) fail(Errc::validation, "--format must be markdown or csv");
      c.format = *f;
    }
    return c;
  }
};

Approach single_method(const ExperimentConfig& c, const std::string& flag) {
  if (!flag.empty()) {
    const auto a = parse_approach(flag);
    if (!a) fail(Errc::validation, "unknown method '" + flag + "'");
    return *a;
  }
  if (c.methods.size() == 1) return c.methods.front();
  fail(Errc::validation, "choose one method with --method");
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : csv::split_line(text, 0)) {
    const auto v = csv::parse_int(csv::trim(part));
    if (!v || *v < 1) fail(Errc::validation, "expected positive integers, got '" + text + "'");
    out.push_back(static_cast<int>(*v));
  }
  return out;
}

void log_progress(const std::string& line) { std::cerr << "  " << line << '\n'; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Encode financial feature vectors as images and compare CNN classifiers"};
  app.require_subcommand(1);

  // synth
  SyntheticSpec synth;
  std::string synth_kind = "fundamental", synth_out, synth_schema_out;
  auto* s = app.add_subcommand("synth", "Write a planted synthetic dataset and its schema");
  s->add_option("--out", synth_out, "Data CSV to write")->required();
  s->add_option("--schema-out", synth_schema_out, "Schema CSV to write (default: <out>.schema.csv)");
  s->add_option("--kind", synth_kind, "fundamental (332 features) or ratio (69)");
  s->add_option("--n-per-year", synth.n_per_year, "Observations per year");
  s->add_option("--first-year", synth.first_year);
  s->add_option("--last-year", synth.last_year);
  s->add_option("--strength", synth.factor_strength, "Factor loading strength in [0, 1]");
  s->add_option("--noise", synth.noise, "Latent score noise");
  s->add_option("--missing", synth.missing_rate, "Upper bound of per-feature missing probability");
  s->add_option("--seed", synth.seed);

  // encode
  std::string enc_data, enc_schema, enc_method = "sa", enc_out;
  std::uint64_t enc_seed = 0;
  int enc_rows = 1, enc_scale = 8;
  auto* e = app.add_subcommand("encode", "Render observations as grid CSV, provenance CSV and PGM");
  e->add_option("--data", enc_data)->required();
  e->add_option("--schema", enc_schema)->required();
  e->add_option("--method", enc_method, "sa, ra, cca, wcr, bcr, hva or hvr");
  e->add_option("--seed", enc_seed, "Seed for randomized arrangements");
  e->add_option("--rows", enc_rows, "Number of leading observations to render");
  e->add_option("--scale", enc_scale, "PGM pixels per cell");
  e->add_option("--out", enc_out, "Output directory")->required();

  // train
  Overrides train_o;
  std::string train_method, train_out;
  auto* t = app.add_subcommand("train", "Train one pipeline on years before the test year");
  train_o.add_to(t, false);
  t->add_option("--method", train_method, "Pipeline to train");
  t->add_option("--out", train_out, "Checkpoint file")->required();

  // evaluate
  std::string ev_model, ev_data, ev_schema, ev_out;
  int ev_year = 0;
  auto* v = app.add_subcommand("evaluate", "Score a checkpoint on one test year");
  v->add_option("--model", ev_model, "Checkpoint from train")->required();
  v->add_option("--data", ev_data)->required();
  v->add_option("--schema", ev_schema)->required();
  v->add_option("--test-year", ev_year)->required();
  v->add_option("--out", ev_out, "Metrics CSV (key,value)")->required();

  // compare
  Overrides cmp_o;
  std::string cmp_out;
  auto* c = app.add_subcommand("compare", "Run every method and write the comparison report");
  cmp_o.add_to(c, true);
  c->add_option("--out", cmp_out, "Report directory (overrides output_dir)");

  // grid-search
  Overrides gs_o;
  std::string gs_method, gs_grid = "16,32,64,128", gs_out;
  auto* g = app.add_subcommand("grid-search", "Tune the two network widths on the test year");
  gs_o.add_to(g, false);
  g->add_option("--method", gs_method, "Pipeline whose network is tuned");
  g->add_option("--grid", gs_grid, "Candidate widths");
  g->add_option("--out", gs_out, "Result CSV")->required();

  CLI11_PARSE(app, argc, argv);

  std::string stage = "setup";
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (*s) {
      stage = "synth";
      if (synth_kind == "fundamental")
        synth.kind = DatasetKind::fundamental;
      else if (synth_kind == "ratio")
        synth.kind = DatasetKind::ratio;
      else
        fail(Errc::validation, "--kind must be fundamental or ratio");
      const Dataset ds = generate_synthetic(synth);
      const fs::path out = synth_out;
      const fs::path schema_out = synth_schema_out.empty() ? fs::path(out.string() + ".schema.csv") : fs::path(synth_schema_out);
      ensure_parent(out);
      ensure_parent(schema_out);
      save_csv(ds, out);
      ds.schema().save_csv(schema_out);
      std::cerr << "wrote " << ds.size() << " observations to " << out.string() << '\n';
    } else if (*e) {
      stage = "encode";
      const auto method = parse_method(enc_method);
      if (!method) fail(Errc::validation, "unknown encoding '" + enc_method + "'");
      const Dataset raw = load_csv(enc_data, FeatureSchema::load_csv(enc_schema));
      if (raw.empty()) fail(Errc::empty_set, "data file has no observations");
      const Dataset ds = apply_standardizer(raw, fit_standardizer(raw));
      const GridLayout layout = make_layout(ArrangementSpec::defaults(*method, ds.schema(), enc_seed), ds.schema());
      const fs::path dir = enc_out;
      fs::create_directories(dir);
      write_provenance_csv(layout.render(std::vector<double>(ds.schema().size(), 0.0)), dir / "provenance.csv");
      const auto n = std::min<std::size_t>(static_cast<std::size_t>(std::max(enc_rows, 0)), ds.size());
      for (std::size_t i = 0; i < n; ++i) {
        const auto& o = ds[i];
        char stem[96];
        std::snprintf(stem, sizeof stem, "%05zu_%s_%dq%d", i, o.entity_id.c_str(), o.period.year, o.period.quarter);
        const ImageGrid grid = layout.render(o.values);
        write_grid_csv(grid, dir / (std::string(stem) + ".csv"));
        write_pgm(grid, dir / (std::string(stem) + ".pgm"), enc_scale);
      }
      std::cerr << "encoded " << n << " observations as " << layout.rows << "x" << layout.cols << " grids\n";
    } else if (*t) {
      stage = "train";
      ExperimentConfig cfg = train_o.build();
      const Approach method = single_method(cfg, train_method);
      cfg.methods = {method};
      cfg.validate();
      const Dataset ds = cfg.data.load();
      const TrainedModel model = train_model(cfg, ds, method);
      ensure_parent(train_out);
      nnet::save_checkpoint(to_checkpoint(model), train_out);
      std::cerr << "final training loss " << (model.network.history.empty() ? 0.0 : model.network.history.back())
                << '\n';
    } else if (*v) {
      stage = "evaluate";
      const FeatureSchema schema = FeatureSchema::load_csv(ev_schema);
      const TrainedModel model = from_checkpoint(nnet::load_checkpoint(ev_model), schema);
      const auto split = out_of_time_split(load_csv(ev_data, schema), ev_year);
      const MetricSummary m = evaluate_model(model, split.test);
      ensure_parent(ev_out);
      write_metrics_csv(m, ev_out);
      std::cerr << "accuracy " << m.accuracy << ", expected notch " << m.expected_notch << '\n';
    } else if (*c) {
      stage = "compare";
      ExperimentConfig cfg = cmp_o.build();
      if (!cmp_out.empty()) cfg.output_dir = cmp_out;
      cfg.progress = log_progress;
      const ExperimentReport report = compare(cfg);
      for (const auto& p : emit_report(report, cfg.format, cfg.output_dir)) std::cerr << "wrote " << p.string() << '\n';
    } else if (*g) {
      stage = "grid-search";
      ExperimentConfig cfg = gs_o.build();
      const Approach method = single_method(cfg, gs_method);
      cfg.methods = {method};
      cfg.validate();
      const Dataset ds = cfg.data.load();
      const auto result = run_grid_search(cfg, ds, method, parse_int_list(gs_grid));
      ensure_parent(gs_out);
      write_grid_search_csv(result, gs_out);
      if (result.best) {
        const auto& b = result.rows[*result.best];
        std::cerr << "best " << b.neurons1 << "/" << b.neurons2 << " validation accuracy " << b.validation_accuracy
                  << '\n';
      }
    }
  } catch (const Error& err) {
    std::cerr << "finimg " << stage << ": " << to_string(err.code()) << ": " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "finimg " << stage << ": " << err.what() << '\n';
    return 1;
  }
  std::cerr << "done in " << seconds_since(t0) << " s\n";
  return 0;
}
