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

// End-to-end acceptance check. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.
//
// Usage: finimg_acceptance [work_dir] [--allow-fail N]...
// The FINIMG_CLI_PATH environment variable overrides the CLI binary used by
// criteria 6, 8 and 9.
// Criteria named with --allow-fail still print FAIL but do not change the
// exit status.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "finimg/csv.hpp"
#include "finimg/encoding.hpp"
#include "finimg/error.hpp"
#include "finimg/experiment.hpp"
#include "finimg/hilbert.hpp"
#include "finimg/metrics.hpp"
#include "finimg/nnet/network.hpp"
#include "finimg/nnet/spec.hpp"
#include "finimg/nnet/train.hpp"
#include "finimg/rng.hpp"
#include "finimg/schema.hpp"
#include "finimg/stats.hpp"
#include "finimg/synthetic.hpp"

namespace fs = std::filesystem;
using namespace finimg;

namespace {

struct Check {
  bool ok = true;
  std::string detail;
};

// Records the first failure; later failures only append.
void require(Check& c, bool cond, const std::string& what) {
  if (cond) return;
  if (c.ok) c.detail.clear();
  else c.detail += "; ";
  c.ok = false;
  c.detail += what;
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string two_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

fs::path g_work;
std::string g_cli;
std::set<int> g_allowed;
int g_failures = 0;
int g_allowed_failures = 0;

void criterion(int n, const std::string& name, double limit_s, const std::function<Check()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  try {
    c = body();
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs >= limit_s) require(c, false, "took " + fmt(secs, 1) + " s, limit " + fmt(limit_s, 0) + " s");
  if (!c.ok) ++(g_allowed.count(n) ? g_allowed_failures : g_failures);
  std::printf("%s %2d %-28s (%.2f s)  %s%s\n", c.ok ? "PASS" : "FAIL", n, name.c_str(), secs, c.detail.c_str(),
              !c.ok && g_allowed.count(n) ? " [allowed]" : "");
  std::fflush(stdout);
}

// --- CLI helpers ----------------------------------------------------------

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\'') out += "'\\''";
    else out += ch;
  }
  return out + "'";
}

bool cli(const std::string& args, const fs::path& log) {
  if (g_cli.empty()) fail(Errc::invalid_argument, "FINIMG_CLI_PATH is not set");
  const std::string cmd = quote(g_cli) + " " + args + " >>" + quote(log.string()) + " 2>&1";
  return std::system(cmd.c_str()) == 0;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(Errc::io, "cannot read " + p.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(csv::split_line(line, line_no));
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) fail(Errc::schema_mismatch, "missing column " + name);
  return static_cast<std::size_t>(it - header.begin());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).generic_string()] = slurp(e.path());
  return files;
}

fs::path fresh_dir(const std::string& name) {
  const auto d = g_work / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// --- 1 ------------------------------------------------------------------

Check hilbert_correctness() {
  Check c;
  std::size_t points = 0;
  for (int n = 1; n <= 6; ++n) {
    const HilbertOrder order{n};
    const auto side = order.side();
    std::vector<char> seen(static_cast<std::size_t>(order.capacity()), 0);
    HilbertPoint prev{};
    for (std::int64_t d = 0; d < order.capacity(); ++d) {
      const auto p = hilbert_d2xy(order, d);
      const bool inside = p.x >= 0 && p.y >= 0 && p.x < side && p.y < side;
      require(c, inside, "order " + std::to_string(n) + " index " + std::to_string(d) + " off grid");
      if (!inside) return c;
      auto& cell = seen[static_cast<std::size_t>(p.y * side + p.x)];
      require(c, !cell, "order " + std::to_string(n) + " cell visited twice");
      cell = 1;
      require(c, hilbert_xy2d(order, p.x, p.y) == d, "order " + std::to_string(n) + " inverse mismatch");
      if (d > 0)
        require(c, std::abs(p.x - prev.x) + std::abs(p.y - prev.y) == 1,
                "order " + std::to_string(n) + " step " + std::to_string(d) + " not adjacent");
      prev = p;
      ++points;
    }
    require(c, std::all_of(seen.begin(), seen.end(), [](char v) { return v != 0; }),
            "order " + std::to_string(n) + " not surjective");
  }
  if (c.ok) c.detail = std::to_string(points) + " points over orders 1-6";
  return c;
}

// --- 2 ------------------------------------------------------------------

Check encoding_provenance() {
  Check c;
  struct Case {
    FeatureSchema schema;
    int rows, cols, hilbert_side;
    ChunkGeometry chunks;
  };
  const std::vector<Case> cases = {
      {FeatureSchema::canonical_fundamental(), 18, 27, 32, {9, 9, 2, 3}},
      {FeatureSchema::canonical_ratio(), 8, 16, 16, {4, 4, 2, 4}},
  };
  int layouts = 0;
  for (const auto& k : cases) {
    const int d = static_cast<int>(k.schema.size());
    const std::string tag = std::to_string(d) + " features";
    require(c, default_chunk_geometry(k.schema) == k.chunks, tag + ": chunk geometry");
    std::vector<double> values(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) values[static_cast<std::size_t>(i)] = 1.0 + i;
    for (Method m : {Method::sa, Method::cca, Method::hva, Method::ra, Method::wcr, Method::bcr, Method::hvr}) {
      const auto spec = ArrangementSpec::defaults(m, k.schema, 11);
      const auto layout = make_layout(spec, k.schema);
      const std::string where = tag + " " + std::string(to_string(m));
      const bool hilbert = m == Method::hva || m == Method::hvr;
      const int rows = hilbert ? k.hilbert_side : k.rows;
      const int cols = hilbert ? k.hilbert_side : k.cols;
      require(c, layout.rows == rows && layout.cols == cols,
              where + ": shape " + std::to_string(layout.rows) + "x" + std::to_string(layout.cols));
      std::vector<int> count(static_cast<std::size_t>(d), 0);
      std::size_t pads = 0;
      for (int src : layout.provenance) {
        if (src == kZeroPad) ++pads;
        else if (src >= 0 && src < d) ++count[static_cast<std::size_t>(src)];
        else require(c, false, where + ": provenance out of range");
      }
      require(c, std::all_of(count.begin(), count.end(), [](int v) { return v == 1; }),
              where + ": a feature is missing or repeated");
      require(c, pads == static_cast<std::size_t>(rows * cols - d), where + ": pad count");
      const auto grid = layout.render(values);
      require(c, grid.zero_pad_count() == pads, where + ": rendered pad count");
      for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        const int src = grid.provenance[i];
        const double expect = src == kZeroPad ? 0.0 : values[static_cast<std::size_t>(src)];
        if (grid.cells[i] != expect) {
          require(c, false, where + ": cell value does not match provenance");
          break;
        }
      }
      ++layouts;
    }
  }
  if (c.ok) c.detail = std::to_string(layouts) + " layouts";
  return c;
}

// --- 3 ------------------------------------------------------------------

nnet::Tensor random_tensor(nnet::Shape shape, std::uint64_t seed) {
  nnet::Tensor t(std::move(shape));
  Rng rng(seed);
  for (auto& v : t.values()) v = rng.uniform(-1.0, 1.0);
  return t;
}

Check gradient_fidelity() {
  using namespace finimg::nnet;
  Check c;
  struct Case {
    std::string name;
    NetworkSpec spec;
  };
  const std::vector<Case> cases = {
      {"dense+relu", {{6}, {DenseSpec{5}, ActivationSpec{ActivationKind::relu}, SoftmaxOutputSpec{4}}}},
      {"dense+tanh", {{6}, {DenseSpec{5}, ActivationSpec{ActivationKind::tanh}, SoftmaxOutputSpec{4}}}},
      {"dense+sigmoid", {{6}, {DenseSpec{5}, ActivationSpec{ActivationKind::sigmoid}, SoftmaxOutputSpec{4}}}},
      {"dense+linear", {{6}, {DenseSpec{5}, ActivationSpec{ActivationKind::linear}, SoftmaxOutputSpec{4}}}},
      {"dropout", {{6}, {DenseSpec{5}, ActivationSpec{ActivationKind::tanh}, DropoutSpec{0.3}, SoftmaxOutputSpec{4}}}},
      {"conv2d", {{2, 6, 7}, {Conv2DSpec{3, 3, 3}, ActivationSpec{ActivationKind::tanh}, FlattenSpec{},
                              SoftmaxOutputSpec{4}}}},
      {"conv2d same", {{2, 5, 5}, {Conv2DSpec{3, 3, 3, true}, ActivationSpec{ActivationKind::sigmoid},
                                   FlattenSpec{}, SoftmaxOutputSpec{4}}}},
      {"maxpool2d", {{1, 7, 8}, {Conv2DSpec{2, 2, 3}, ActivationSpec{ActivationKind::relu}, MaxPoolSpec{2},
                                 FlattenSpec{}, SoftmaxOutputSpec{3}}}},
      {"conv1d+maxpool1d", {{2, 11}, {Conv1DSpec{3, 3}, ActivationSpec{ActivationKind::tanh}, MaxPoolSpec{2},
                                      Conv1DSpec{2, 1, true}, FlattenSpec{}, SoftmaxOutputSpec{5}}}},
      {"build_cnn2d 8x8", build_cnn2d(8, 8)},
  };
  double worst = 0.0;
  std::size_t checked = 0;
  std::uint64_t seed = 1;
  const std::vector<int> label = {1};
  for (const auto& k : cases) {
    Network net(k.spec);
    net.initialize(seed);
    const auto x = random_tensor(k.spec.input_shape, 100 + seed);
    ++seed;
    const auto r = gradient_check(net, x, {label, nullptr}, 1e-5, Mode::infer);
    require(c, r.max_relative_error < 1e-4, k.name + ": relative error " + std::to_string(r.max_relative_error));
    worst = std::max(worst, r.max_relative_error);
    checked += r.checked;
  }
  {
    // Mean-squared-error head of the auto-encoder.
    const auto spec = build_autoencoder(6, 2, 5);
    Network net(spec);
    net.initialize(77);
    const auto target = random_tensor({1, 6}, 78);
    const auto r = gradient_check(net, random_tensor({6}, 79), {{}, &target}, 1e-5, Mode::infer);
    require(c, r.max_relative_error < 1e-4, "autoencoder: relative error " + std::to_string(r.max_relative_error));
    worst = std::max(worst, r.max_relative_error);
    checked += r.checked;
  }
  if (c.ok) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "max rel err %.2e over %zu gradients", worst, checked);
    c.detail = buf;
  }
  return c;
}

// --- 4 ------------------------------------------------------------------

Check metric_oracles() {
  Check c;
  Rng rng(4242);
  for (int trial = 0; trial < 1000 && c.ok; ++trial) {
    const auto n = 1 + rng.below(60);
    std::vector<int> y, yhat;
    for (std::size_t k = 0; k < n; ++k) {
      y.push_back(static_cast<int>(rng.below(12)));
      yhat.push_back(rng.bernoulli(0.35) ? y.back() : static_cast<int>(rng.below(12)));
    }
    const PredictionSet p(y, yhat);
    const double nn = static_cast<double>(n);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < n; ++k) hits += y[k] == yhat[k];
    const double acc = static_cast<double>(hits) / nn;
    require(c, accuracy(p) == acc, "accuracy differs");

    const auto d = notch_frequency(p);
    double e = 0.0, num = 0.0, den = 0.0;
    for (int i = -11; i <= 11; ++i) {
      std::size_t cnt = 0;
      for (std::size_t k = 0; k < n; ++k) cnt += yhat[k] - y[k] == i;
      const double f = static_cast<double>(cnt) / nn;
      require(c, (d.freq.count(i) ? d.freq.at(i) : 0.0) == f, "notch frequency differs");
      e += std::abs(i) * f;
      if (i != 0) {
        num += std::abs(i) * f;
        den += f;
      }
    }
    require(c, expected_abs_notch(d) == e, "expected notch differs");
    if (acc < 1.0) {
      require(c, conditional_notch(d) == num / den, "conditional notch differs");
      require(c, std::abs(expected_abs_notch(d) - (1.0 - acc) * conditional_notch(d)) <= 1e-12,
              "notch identity violated");
    }
  }
  const auto a = precision_recall_f1_binary(9, 1, 91);
  require(c, two_decimals(a.precision) == "0.90" && two_decimals(a.recall) == "0.09" && two_decimals(a.f1) == "0.16",
          "first worked example gives " + two_decimals(a.precision) + "/" + two_decimals(a.recall) + "/" +
              two_decimals(a.f1));
  const auto b = precision_recall_f1_binary(5, 5, 1);
  require(c, two_decimals(b.precision) == "0.50" && two_decimals(b.recall) == "0.83" && two_decimals(b.f1) == "0.62",
          "second worked example gives " + two_decimals(b.precision) + "/" + two_decimals(b.recall) + "/" +
              two_decimals(b.f1));
  if (c.ok)
    c.detail = "1000 sets exact; (" + two_decimals(a.precision) + ", " + two_decimals(a.recall) + ", " +
               two_decimals(a.f1) + ") (" + two_decimals(b.precision) + ", " + two_decimals(b.recall) + ", " +
               two_decimals(b.f1) + ")";
  return c;
}

// --- 5 ------------------------------------------------------------------

std::vector<double> normal_sample(double mean, double sd, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(mean + sd * rng.normal());
  return v;
}

Check statistics() {
  Check c;
  struct Row {
    double t, df, p;
  };
  // Standard t-table quantiles.
  const std::vector<Row> table = {{2.045, 29, 0.975}, {1.699, 29, 0.95}, {2.756, 29, 0.995}, {12.706, 1, 0.975},
                                  {2.228, 10, 0.975}, {1.812, 10, 0.95}, {3.169, 10, 0.995}, {1.984, 100, 0.975},
                                  {-2.045, 29, 0.025}, {0.0, 7, 0.5}};
  double worst = 0.0;
  for (const auto& r : table) {
    const double err = std::abs(t_cdf(r.t, r.df) - r.p);
    worst = std::max(worst, err);
    require(c, err <= 1e-3, "t_cdf(" + fmt(r.t, 3) + ", " + fmt(r.df, 0) + ") off by " + fmt(err, 5));
  }
  const auto planted = pairwise_t_bonferroni(
      {{"low", normal_sample(0.3, 0.01, 30, 3)}, {"high", normal_sample(0.6, 0.01, 30, 1)},
       {"mid", normal_sample(0.5, 0.01, 30, 2)}});
  const std::vector<std::vector<std::string>> singles = {{"high"}, {"mid"}, {"low"}};
  require(c, planted.grouping.groups == singles, "planted groups: " + render_grouping(planted.grouping));
  const auto same = normal_sample(0.5, 0.01, 30, 4);
  const auto merged = pairwise_t_bonferroni({{"a", same}, {"b", same}, {"c", same}});
  require(c, merged.grouping.groups.size() == 1 && merged.grouping.groups[0].size() == 3,
          "identical groups: " + render_grouping(merged.grouping));
  if (c.ok)
    c.detail = "max table error " + fmt(worst, 5) + "; " + render_grouping(planted.grouping) + "; " +
               render_grouping(merged.grouping);
  return c;
}

// --- 6 ------------------------------------------------------------------

Check protocol_reproduction() {
  Check c;
  const auto dir = fresh_dir("protocol");
  const auto log = dir / "cli.log";
  const auto data = dir / "data.csv";
  const auto schema = dir / "schema.csv";
  const int runs = 10;
  require(c,
          cli("synth --kind fundamental --n-per-year 240 --first-year 2000 --last-year 2016 --strength 0.9 "
              "--seed 1 --out " + quote(data.string()) + " --schema-out " + quote(schema.string()),
              log),
          "synth failed, see " + log.string());
  if (!c.ok) return c;
  const auto out = dir / "report";
  require(c,
          cli("compare --data " + quote(data.string()) + " --schema " + quote(schema.string()) +
                  " --test-year 2016 --methods cca,wcr,bcr --runs " + std::to_string(runs) +
                  " --epochs 5 --seed 0 --out " + quote(out.string()),
              log),
          "compare failed, see " + log.string());
  if (!c.ok) return c;

  // Run records per method.
  const auto run_rows = read_csv(out / "runs.csv");
  const auto mcol = column(run_rows.at(0), "method");
  const auto acol = column(run_rows.at(0), "accuracy");
  std::map<std::string, std::vector<double>> acc;
  for (std::size_t i = 1; i < run_rows.size(); ++i)
    acc[run_rows[i][mcol]].push_back(*csv::parse_double(run_rows[i][acol]));
  require(c, acc["cca"].size() == 1, "cca has " + std::to_string(acc["cca"].size()) + " records");
  const std::string report = slurp(out / "report.md");
  for (const std::string m : {"wcr", "bcr"}) {
    require(c, acc[m].size() == static_cast<std::size_t>(runs),
            m + " has " + std::to_string(acc[m].size()) + " records");
    if (acc[m].size() < 2) continue;
    // The stderr printed in the table must come from these records.
    const auto s = summarize(acc[m]);
    const auto name = std::string(experiment::display_name(*experiment::parse_approach(m)));
    const std::string row = "| " + name + " | " + experiment::format_cell(s.mean, s.standard_error) + " |";
    require(c, report.find(row) != std::string::npos, "report row for " + name + " does not match runs.csv");
  }

  // One-sided test of CCA against the WCR randomizations.
  const auto sig = read_csv(out / "significance.csv");
  const auto smethod = column(sig.at(0), "method"), scontrol = column(sig.at(0), "control");
  const auto sref = column(sig.at(0), "reference"), smean = column(sig.at(0), "control_mean");
  const auto sp = column(sig.at(0), "p");
  bool found = false;
  double p = 1.0, ref = 0.0, mean = 0.0;
  for (std::size_t i = 1; i < sig.size(); ++i)
    if (sig[i][smethod] == "cca" && sig[i][scontrol] == "wcr") {
      found = true;
      ref = *csv::parse_double(sig[i][sref]);
      mean = *csv::parse_double(sig[i][smean]);
      const auto pv = csv::parse_double(sig[i][sp]);
      p = pv ? *pv : 1.0;
    }
  require(c, found, "no cca vs wcr test in significance.csv");
  if (found && acc["wcr"].size() >= 2) {
    const auto oracle = one_sample_t_greater(acc["wcr"], acc["cca"].at(0));
    require(c, std::abs(oracle.p - p) <= 1e-9 * std::max(1.0, p), "p-value does not match runs.csv");
  }
  require(c, ref > mean, "CCA " + fmt(ref, 3) + " does not exceed WCR mean " + fmt(mean, 3));
  require(c, p < 0.05, "one-sided p = " + fmt(p, 4));
  if (c.ok) c.detail = "CCA " + fmt(ref, 3) + " vs WCR " + fmt(mean, 3) + ", p = " + fmt(p, 5);
  return c;
}

// --- 7 ------------------------------------------------------------------

Check chance_level() {
  using namespace finimg::experiment;
  Check c;
  ExperimentConfig cfg;
  SyntheticSpec s;
  s.kind = DatasetKind::ratio;
  s.n_per_year = 120;
  s.first_year = 2000;
  s.last_year = 2004;
  s.factor_strength = 0.0;
  s.seed = 31;
  cfg.data.synthetic = s;
  cfg.test_year = 2004;
  cfg.randomization_runs = 10;
  cfg.training_seeds = 10;
  cfg.pairwise = true;
  cfg.seed = 500;
  cfg.train.epochs = 5;
  cfg.model.autoencoder_code = 49;
  cfg.methods = parse_approaches("mlp,cnn1d,sa,ra,cca,wcr,bcr,hva,hvr,reduced_hva,autoencoder_sa");
  cfg.validate();
  const auto ds = cfg.data.load();
  const double chance = 1.0 / 12.0;
  double worst_z = 0.0;
  for (const auto a : cfg.methods) {
    const auto res = run_method(cfg, ds, a);
    const auto acc = res.accuracies();
    require(c, acc.size() == 10, std::string(to_string(a)) + " has " + std::to_string(acc.size()) + " runs");
    const auto sm = summarize(acc);
    const double dev = std::abs(sm.mean - chance);
    require(c, dev <= 3.0 * sm.standard_error + 1e-12,
            std::string(to_string(a)) + " mean " + fmt(sm.mean) + " se " + fmt(sm.standard_error));
    if (sm.standard_error > 0) worst_z = std::max(worst_z, dev / sm.standard_error);
  }
  if (c.ok) c.detail = "11 methods, largest |mean - 1/12| / se = " + fmt(worst_z, 2);
  return c;
}

// --- 8 ------------------------------------------------------------------

bool run_cli_suite(const fs::path& dir, const fs::path& log) {
  const auto d = quote((dir / "data.csv").string());
  const auto s = quote((dir / "schema.csv").string());
  const std::string common = " --data " + d + " --schema " + s + " --test-year 2003";
  return cli("synth --kind ratio --n-per-year 36 --first-year 2000 --last-year 2003 --missing 0.2 --seed 5 --out " +
                 d + " --schema-out " + s,
             log) &&
         cli("encode --data " + d + " --schema " + s + " --method wcr --seed 3 --rows 4 --out " +
                 quote((dir / "encoded").string()),
             log) &&
         cli("train" + common + " --method cca --epochs 2 --seed 4 --filters 8,8 --out " +
                 quote((dir / "model.ckpt").string()),
             log) &&
         cli("evaluate --model " + quote((dir / "model.ckpt").string()) + " --data " + d + " --schema " + s +
                 " --test-year 2003 --out " + quote((dir / "metrics.csv").string()),
             log) &&
         cli("compare" + common + " --methods sa,ra,cca,wcr,mlp --runs 3 --training-seeds 2 --pairwise --epochs 1"
                 " --filters 8,8 --seed 9 --out " + quote((dir / "compare").string()),
             log) &&
         cli("compare" + common + " --methods hva,hvr --runs 2 --epochs 1 --filters 8,8 --seed 9 --format csv --out " +
                 quote((dir / "compare_csv").string()),
             log) &&
         cli("grid-search" + common + " --method mlp --grid 8,16 --epochs 1 --seed 2 --out " +
                 quote((dir / "grid.csv").string()),
             log);
}

Check determinism() {
  Check c;
  const auto log = g_work / "determinism.log";
  fs::remove(log);
  std::map<std::string, std::string> first;
  for (int pass = 0; pass < 2; ++pass) {
    const auto dir = fresh_dir("determinism");
    require(c, run_cli_suite(dir, log), "CLI failed on pass " + std::to_string(pass + 1) + ", see " + log.string());
    if (!c.ok) return c;
    auto files = snapshot(dir);
    if (pass == 0) {
      first = std::move(files);
      continue;
    }
    require(c, files.size() == first.size(), "file sets differ");
    for (const auto& [name, bytes] : first) {
      const auto it = files.find(name);
      require(c, it != files.end() && it->second == bytes, name + " differs between runs");
    }
  }
  if (c.ok) c.detail = std::to_string(first.size()) + " files byte-identical across 7 commands";
  return c;
}

// --- 9 ------------------------------------------------------------------

Check grid_search() {
  Check c;
  const auto dir = fresh_dir("grid");
  const auto log = dir / "cli.log";
  const auto d = quote((dir / "data.csv").string());
  const auto s = quote((dir / "schema.csv").string());
  require(c,
          cli("synth --kind ratio --n-per-year 60 --first-year 2000 --last-year 2004 --seed 8 --out " + d +
                  " --schema-out " + s,
              log) &&
              cli("grid-search --data " + d + " --schema " + s + " --test-year 2004 --method mlp --epochs 3 --seed 1"
                  " --out " + quote((dir / "grid.csv").string()),
                  log),
          "CLI failed, see " + log.string());
  if (!c.ok) return c;
  const auto rows = read_csv(dir / "grid.csv");
  require(c, rows.size() == 17, "expected 16 data rows, got " + std::to_string(rows.size() - 1));
  if (!c.ok) return c;
  const auto& h = rows[0];
  const auto c1 = column(h, "neurons1"), c2 = column(h, "neurons2"), cp = column(h, "parameters");
  const auto cv = column(h, "validation_accuracy"), cb = column(h, "best");
  const std::vector<int> grid = {16, 32, 64, 128};
  std::size_t best_flagged = 0, flags = 0, oracle = 0;
  double best_acc = -1.0;
  long long best_params = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const int n1 = static_cast<int>(*csv::parse_int(r[c1]));
    const int n2 = static_cast<int>(*csv::parse_int(r[c2]));
    require(c, n1 == grid[(i - 1) / 4] && n2 == grid[(i - 1) % 4], "row " + std::to_string(i) + " out of grid order");
    const double v = *csv::parse_double(r[cv]);
    const long long params = *csv::parse_int(r[cp]);
    if (v > best_acc || (v == best_acc && params < best_params)) {
      best_acc = v;
      best_params = params;
      oracle = i;
    }
    if (r[cb] == "1") {
      ++flags;
      best_flagged = i;
    }
  }
  require(c, flags == 1, std::to_string(flags) + " rows flagged best");
  require(c, best_flagged == oracle, "flagged row is not the validation argmax");
  if (c.ok)
    c.detail = "16 rows, best " + rows[oracle][c1] + "/" + rows[oracle][c2] + " at " + fmt(best_acc, 3);
  return c;
}

// --- 10 -----------------------------------------------------------------

Check reduced_padding() {
  using namespace finimg::experiment;
  Check c;
  std::string detail;
  for (const auto kind : {DatasetKind::fundamental, DatasetKind::ratio}) {
    SyntheticSpec s;
    s.kind = kind;
    s.n_per_year = 24;
    s.first_year = 2000;
    s.last_year = 2001;
    s.missing_rate = 0.3;
    s.seed = 12;
    const auto ds = generate_synthetic(s);
    const int d = static_cast<int>(ds.schema().size());
    const int target = largest_power_of_four_at_most(d);
    const int side = static_cast<int>(std::lround(std::sqrt(target)));
    const auto reduced = reduce_features(ds, target);
    require(c, static_cast<int>(reduced.schema.size()) == target, "reduced schema size");
    const auto layout = hilbert_layout(target);
    require(c, layout.rows == side && layout.cols == side, "reduced grid shape");
    const auto pads = std::count(layout.provenance.begin(), layout.provenance.end(), kZeroPad);
    require(c, pads == 0, std::to_string(d) + " -> " + std::to_string(target) + ": " + std::to_string(pads) + " pads");

    // Same through the fitted pipeline encoder.
    ExperimentConfig cfg;
    const auto enc = fit_encoder(ds, Approach::reduced_hva, 0, cfg, 0);
    require(c, enc.layout && enc.layout->rows == side && enc.layout->cols == side, "pipeline grid shape");
    if (enc.layout)
      require(c, std::count(enc.layout->provenance.begin(), enc.layout->provenance.end(), kZeroPad) == 0,
              "pipeline grid has pads");
    const auto images = enc.encode(ds);
    require(c, images.shape() == (nnet::Shape{ds.size(), 1, static_cast<std::size_t>(side), static_cast<std::size_t>(side)}),
            "pipeline tensor shape " + nnet::shape_string(images.shape()));
    if (!detail.empty()) detail += ", ";
    detail += std::to_string(d) + "->" + std::to_string(target) + " on " + std::to_string(side) + "x" +
              std::to_string(side) + " with 0 pads";
  }
  if (c.ok) c.detail = detail;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  g_work = fs::temp_directory_path() / "finimg_acceptance";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--allow-fail" && i + 1 < argc)
      g_allowed.insert(std::atoi(argv[++i]));
    else
      g_work = arg;
  }
  fs::create_directories(g_work);
#ifdef FINIMG_CLI_PATH
  g_cli = FINIMG_CLI_PATH;
#endif
  if (const char* p = std::getenv("FINIMG_CLI_PATH")) g_cli = p;

  criterion(1, "hilbert correctness", 1.0, hilbert_correctness);
  criterion(2, "encoding provenance", 1.0, encoding_provenance);
  criterion(3, "gradient fidelity", 30.0, gradient_fidelity);
  criterion(4, "metric oracles", 0.0, metric_oracles);
  criterion(5, "statistics", 0.0, statistics);
  criterion(6, "protocol reproduction", 900.0, protocol_reproduction);
  criterion(7, "chance-level control", 0.0, chance_level);
  criterion(8, "determinism", 0.0, determinism);
  criterion(9, "grid search", 0.0, grid_search);
  criterion(10, "reduced padding", 0.0, reduced_padding);

  std::printf("%d of 10 criteria failed", g_failures + g_allowed_failures);
  if (g_allowed_failures) std::printf(" (%d allowed)", g_allowed_failures);
  std::printf("\n");
  return g_failures == 0 ? 0 : 1;
}
