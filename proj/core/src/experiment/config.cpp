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

#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "finimg/error.hpp"
#include "finimg/experiment.hpp"

namespace finimg::experiment {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 11> kApproachNames = {
    "mlp", "cnn1d", "sa", "ra", "cca", "wcr", "bcr", "hva", "hvr", "reduced_hva", "autoencoder_sa"};
constexpr std::array<std::string_view, 11> kDisplayNames = {
    "MLP", "1D CNN", "SA", "RA", "CCA", "WCR", "BCR", "HVA", "HVR", "Reduced HVA", "Auto-encoder SA"};

[[noreturn]] void bad(const std::string& where, const std::string& msg) {
  fail(Errc::validation, "config " + where + ": " + msg);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) bad(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const auto a : allowed) ok = ok || key == a;
    if (!ok) bad(where, "unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    bad(where + "." + key, e.what());
  }
}

std::string kind_name(DatasetKind k) { return std::string(to_string(k)); }

DatasetKind parse_kind(const std::string& s, const std::string& where) {
  for (const auto k : {DatasetKind::fundamental, DatasetKind::ratio})
    if (s == to_string(k)) return k;
  bad(where, "kind must be 'fundamental' or 'ratio', got '" + s + "'");
}

SyntheticSpec parse_synthetic(const json& j, const std::string& where) {
  check_keys(j, where, {"n_per_year", "first_year", "last_year", "kind", "factor_strength", "noise",
                        "missing_rate", "seed"});
  SyntheticSpec s;
  read(j, "n_per_year", s.n_per_year, where);
  read(j, "first_year", s.first_year, where);
  read(j, "last_year", s.last_year, where);
  std::string kind = kind_name(s.kind);
  read(j, "kind", kind, where);
  s.kind = parse_kind(kind, where + ".kind");
  read(j, "factor_strength", s.factor_strength, where);
  read(j, "noise", s.noise, where);
  read(j, "missing_rate", s.missing_rate, where);
  read(j, "seed", s.seed, where);
  return s;
}

json synthetic_json(const SyntheticSpec& s) {
  return json{{"n_per_year", s.n_per_year},       {"first_year", s.first_year},
              {"last_year", s.last_year},         {"kind", kind_name(s.kind)},
              {"factor_strength", s.factor_strength}, {"noise", s.noise},
              {"missing_rate", s.missing_rate},   {"seed", s.seed}};
}

// "data" is a path string or a synthetic object; "schema" a path string.
DataSource parse_source(const json& root, const char* data_key, const char* schema_key) {
  DataSource src;
  if (root.contains(data_key)) {
    const auto& d = root.at(data_key);
    if (d.is_string())
      src.path = d.get<std::string>();
    else
      src.synthetic = parse_synthetic(d, data_key);
  }
  if (root.contains(schema_key)) {
    if (!root.at(schema_key).is_string()) bad(schema_key, "expected a path string");
    src.schema = root.at(schema_key).get<std::string>();
  }
  return src;
}

json source_json(const DataSource& s) {
  json j = json::object();
  if (s.path) j["path"] = s.path->generic_string();
  if (s.schema) j["schema"] = s.schema->generic_string();
  if (s.synthetic) j["synthetic"] = synthetic_json(*s.synthetic);
  return j;
}

}  // namespace

std::string_view to_string(Approach a) noexcept { return kApproachNames[static_cast<std::size_t>(a)]; }
std::string_view display_name(Approach a) noexcept { return kDisplayNames[static_cast<std::size_t>(a)]; }

std::optional<Approach> parse_approach(std::string_view text) noexcept {
  for (std::size_t i = 0; i < kApproachNames.size(); ++i)
    if (text == kApproachNames[i]) return static_cast<Approach>(i);
  return std::nullopt;
}

std::vector<Approach> parse_approaches(std::string_view list) {
  std::vector<Approach> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto end = std::min(list.find(',', start), list.size());
    std::string_view token = list.substr(start, end - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty()) {
      const auto a = parse_approach(token);
      if (!a) fail(Errc::validation, "unknown method '" + std::string(token) + "'");
      out.push_back(*a);
    }
    start = end + 1;
  }
  return out;
}

bool is_randomized(Approach a) noexcept {
  return a == Approach::ra || a == Approach::wcr || a == Approach::bcr || a == Approach::hvr;
}

std::vector<Approach> controls_of(Approach a) {
  switch (a) {
    case Approach::sa: return {Approach::ra};
    case Approach::cca: return {Approach::wcr, Approach::bcr};
    case Approach::hva: return {Approach::hvr};
    default: return {};
  }
}

std::optional<ReportFormat> parse_format(std::string_view text) noexcept {
  if (text == "csv") return ReportFormat::csv;
  if (text == "markdown" || text == "md") return ReportFormat::markdown;
  return std::nullopt;
}

Dataset DataSource::load() const {
  if (synthetic) {
    if (path) fail(Errc::validation, "data source has both a file and a synthetic specification");
    return generate_synthetic(*synthetic);
  }
  if (!path) fail(Errc::validation, "no data source configured");
  if (!schema) fail(Errc::validation, "data file " + path->string() + " needs a schema file");
  return load_csv(*path, FeatureSchema::load_csv(*schema));
}

void ExperimentConfig::validate() const {
  if (!data.configured()) fail(Errc::validation, "no data source configured");
  if (methods.empty()) fail(Errc::validation, "method list is empty");
  std::set<Approach> seen;
  for (const auto m : methods)
    if (!seen.insert(m).second) fail(Errc::validation, "method '" + std::string(to_string(m)) + "' listed twice");
  bool randomized = false;
  for (const auto m : methods) randomized = randomized || is_randomized(m);
  if (randomized && randomization_runs < 2)
    fail(Errc::validation, "randomization_runs must be at least 2 when a randomized method is selected");
  if (randomization_runs < 1) fail(Errc::validation, "randomization_runs must be positive");
  if (pairwise && training_seeds < 2) fail(Errc::validation, "pairwise mode needs at least 2 training seeds");
  if (training_seeds < 1) fail(Errc::validation, "training_seeds must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) fail(Errc::validation, "alpha must be in (0, 1)");
  if (model.filters1 < 1 || model.filters2 < 1 || model.mlp_hidden1 < 1 || model.mlp_hidden2 < 1 ||
      model.autoencoder_code < 1 || model.autoencoder_hidden < 1)
    fail(Errc::validation, "model widths must be positive");
  if (!(model.mlp_dropout >= 0.0 && model.mlp_dropout < 1.0))
    fail(Errc::validation, "mlp dropout must be in [0, 1)");
  train.validate();
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::parse, std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "root",
             {"data", "schema", "ratio_data", "ratio_schema", "test_year", "methods", "randomization_runs",
              "training_seeds", "pairwise", "seed", "alpha", "train", "model", "output_dir", "format"});
  ExperimentConfig c;
  c.data = parse_source(root, "data", "schema");
  DataSource ratio = parse_source(root, "ratio_data", "ratio_schema");
  if (ratio.configured()) c.ratio_data = std::move(ratio);
  read(root, "test_year", c.test_year, "root");
  if (root.contains("methods")) {
    const auto& m = root.at("methods");
    if (m.is_string()) {
      c.methods = parse_approaches(m.get<std::string>());
    } else if (m.is_array()) {
      for (const auto& item : m) {
        if (!item.is_string()) bad("methods", "entries must be strings");
        const auto a = parse_approach(item.get<std::string>());
        if (!a) bad("methods", "unknown method '" + item.get<std::string>() + "'");
        c.methods.push_back(*a);
      }
    } else {
      bad("methods", "expected a list or a comma-separated string");
    }
  }
  read(root, "randomization_runs", c.randomization_runs, "root");
  read(root, "training_seeds", c.training_seeds, "root");
  read(root, "pairwise", c.pairwise, "root");
  read(root, "seed", c.seed, "root");
  read(root, "alpha", c.alpha, "root");
  if (root.contains("train")) {
    const auto& t = root.at("train");
    check_keys(t, "train", {"epochs", "learning_rate", "batch_size", "optimizer"});
    read(t, "epochs", c.train.epochs, "train");
    read(t, "learning_rate", c.train.learning_rate, "train");
    read(t, "batch_size", c.train.batch_size, "train");
    std::string opt = "adam";
    read(t, "optimizer", opt, "train");
    if (opt == "adam")
      c.train.optimizer = nnet::Optimizer::adam;
    else if (opt == "sgd")
      c.train.optimizer = nnet::Optimizer::sgd;
    else
      bad("train.optimizer", "expected 'adam' or 'sgd'");
  }
  if (root.contains("model")) {
    const auto& m = root.at("model");
    check_keys(m, "model", {"mlp_hidden1", "mlp_hidden2", "mlp_dropout", "filters1", "filters2",
                            "autoencoder_code", "autoencoder_hidden", "autoencoder_epochs"});
    read(m, "mlp_hidden1", c.model.mlp_hidden1, "model");
    read(m, "mlp_hidden2", c.model.mlp_hidden2, "model");
    read(m, "mlp_dropout", c.model.mlp_dropout, "model");
    read(m, "filters1", c.model.filters1, "model");
    read(m, "filters2", c.model.filters2, "model");
    read(m, "autoencoder_code", c.model.autoencoder_code, "model");
    read(m, "autoencoder_hidden", c.model.autoencoder_hidden, "model");
    read(m, "autoencoder_epochs", c.model.autoencoder_epochs, "model");
  }
  if (root.contains("output_dir")) {
    std::string dir;
    read(root, "output_dir", dir, "root");
    c.output_dir = dir;
  }
  if (root.contains("format")) {
    std::string f;
    read(root, "format", f, "root");
    const auto fmt = parse_format(f);
    if (!fmt) bad("format", "expected 'csv' or 'markdown'");
    c.format = *fmt;
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string ExperimentConfig::canonical_json() const {
  json j;
  j["data"] = source_json(data);
  if (ratio_data) j["ratio_data"] = source_json(*ratio_data);
  j["test_year"] = test_year;
  json m = json::array();
  for (const auto a : methods) m.push_back(std::string(to_string(a)));
  j["methods"] = m;
  j["randomization_runs"] = randomization_runs;
  j["training_seeds"] = training_seeds;
  j["pairwise"] = pairwise;
  j["seed"] = seed;
  j["alpha"] = alpha;
  j["train"] = {{"epochs", train.epochs},
                {"learning_rate", train.learning_rate},
                {"batch_size", train.batch_size},
                {"optimizer", train.optimizer == nnet::Optimizer::adam ? "adam" : "sgd"}};
  j["model"] = {{"mlp_hidden1", model.mlp_hidden1},
                {"mlp_hidden2", model.mlp_hidden2},
                {"mlp_dropout", model.mlp_dropout},
                {"filters1", model.filters1},
                {"filters2", model.filters2},
                {"autoencoder_code", model.autoencoder_code},
                {"autoencoder_hidden", model.autoencoder_hidden},
                {"autoencoder_epochs", model.autoencoder_epochs}};
  return j.dump();
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : canonical_json()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace finimg::experiment
