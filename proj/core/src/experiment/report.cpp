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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "finimg/csv.hpp"
#include "finimg/error.hpp"
#include "finimg/experiment.hpp"

namespace finimg::experiment {

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string table_title(const Dataset& ds) {
  switch (ds.schema().kind()) {
    case DatasetKind::fundamental: return "Fundamental data";
    case DatasetKind::ratio: return "Financial ratio data";
    default: return "Data";
  }
}

const MethodResult* find_result(const std::vector<MethodResult>& results, Approach a) {
  for (const auto& r : results)
    if (r.method == a) return &r;
  return nullptr;
}

const ReportRow* find_row(const ReportTable& t, Approach a) {
  for (const auto& r : t.rows)
    if (r.method == a) return &r;
  return nullptr;
}

std::vector<MethodResult> run_all(const ExperimentConfig& config, const Dataset& ds,
                                  const std::vector<Approach>& methods) {
  std::vector<MethodResult> results;
  for (const auto m : methods) results.push_back(run_method(config, ds, m));
  return results;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(Errc::io, "failed writing " + path.string());
}

std::string optional_number(std::optional<double> v) { return v ? csv::format_double(*v) : std::string(); }

std::string notch_cell(const ReportRow& r) { return r.notch ? format_cell(*r.notch, r.notch_se) : "n/a"; }

std::string alpha_text(double alpha) {
  std::ostringstream os;
  os << alpha;
  return os.str();
}

}  // namespace

std::string format_cell(double value, std::optional<double> se, bool star) {
  std::string out = fixed3(value);
  if (star) out += '*';
  if (se) out += " (" + fixed3(*se) + ")";
  return out;
}

ReportTable summarize_results(std::string title, std::vector<MethodResult> results, const ExperimentConfig& config) {
  ReportTable table;
  table.title = std::move(title);
  for (const auto& res : results) {
    if (res.runs.empty()) fail(Errc::empty_set, "method " + std::string(to_string(res.method)) + " has no runs");
    ReportRow row;
    row.method = res.method;
    row.runs = res.runs.size();
    const auto acc = res.accuracies();
    if (acc.size() >= 2) {
      const auto s = summarize(acc);
      row.accuracy = s.mean;
      row.accuracy_se = s.standard_error;
    } else {
      row.accuracy = acc.front();
    }
    std::vector<double> notches;
    for (const auto& r : res.runs)
      if (r.metrics.conditional_notch) notches.push_back(*r.metrics.conditional_notch);
    if (notches.size() >= 2 && res.runs.size() >= 2) {
      const auto s = summarize(notches);
      row.notch = s.mean;
      row.notch_se = s.standard_error;
    } else if (!notches.empty()) {
      row.notch = notches.front();
    }
    for (const auto c : controls_of(res.method)) {
      const MethodResult* control = find_result(results, c);
      if (!control) continue;
      ControlTest t;
      t.control = c;
      t.reference = row.accuracy;
      const auto samples = control->accuracies();
      t.control_mean = summarize(samples).mean;
      try {
        t.test = one_sample_t_greater(samples, row.accuracy);
      } catch (const Error& e) {
        if (e.code() != Errc::zero_variance) throw;
        t.test = {std::nan(""), std::nan(""), static_cast<double>(samples.size() - 1)};
      }
      row.tests.push_back(t);
    }
    row.significant = !row.tests.empty();
    for (const auto& t : row.tests) row.significant = row.significant && t.test.p < config.alpha;
    table.rows.push_back(std::move(row));
  }
  if (config.pairwise && results.size() >= 2) {
    LabeledSamples groups;
    bool enough = true;
    for (const auto& res : results) {
      enough = enough && res.runs.size() >= 2;
      groups.emplace_back(std::string(display_name(res.method)), res.accuracies());
    }
    if (enough) table.pairwise = pairwise_t_bonferroni(groups, config.alpha);
  }
  table.results = std::move(results);
  return table;
}

ExperimentReport compare(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config_hash = config.hash();
  report.seed = config.seed;
  report.test_year = config.test_year;
  report.alpha = config.alpha;

  const Dataset primary = config.data.load();
  report.tables.push_back(summarize_results(table_title(primary), run_all(config, primary, config.methods), config));

  std::optional<Dataset> ratios;
  if (config.ratio_data) {
    ratios = config.ratio_data->load();
    std::vector<Approach> methods;
    for (const auto m : config.methods)
      if (m != Approach::autoencoder_sa) methods.push_back(m);
    if (!methods.empty())
      report.tables.push_back(summarize_results(table_title(*ratios), run_all(config, *ratios, methods), config));
  }

  const auto add_reduced = [&](const ReportTable& t, const Dataset& ds) {
    const auto* hva = find_result(t.results, Approach::hva);
    const auto* reduced = find_result(t.results, Approach::reduced_hva);
    if (hva && reduced) report.reduced.push_back(reduced_padding_row(t.title, ds, *hva, *reduced));
  };
  add_reduced(report.tables[0], primary);
  if (ratios && report.tables.size() > 1) add_reduced(report.tables[1], *ratios);

  if (const auto* ae = find_row(report.tables[0], Approach::autoencoder_sa)) {
    AutoencoderRow row;
    row.code_dim = config.model.autoencoder_code;
    row.autoencoder_accuracy = ae->accuracy;
    if (const auto* sa = find_row(report.tables[0], Approach::sa)) row.fundamental_sa = sa->accuracy;
    if (report.tables.size() > 1)
      if (const auto* sa = find_row(report.tables[1], Approach::sa)) row.ratio_sa = sa->accuracy;
    report.autoencoder = row;
  }
  return report;
}

std::string render_markdown(const ExperimentReport& report) {
  std::ostringstream os;
  os << "# Encoding comparison\n\n";
  os << "Config hash `" << report.config_hash << "`, seed " << report.seed << ", test year " << report.test_year
     << ".\n";
  bool any_star = false;
  for (const auto& t : report.tables) {
    os << "\n## " << t.title << "\n\n";
    os << "| Method | Accuracy | Notch Distance | Runs |\n";
    os << "|---|---|---|---|\n";
    for (const auto& r : t.rows) {
      any_star = any_star || r.significant;
      os << "| " << display_name(r.method) << " | " << format_cell(r.accuracy, r.accuracy_se, r.significant) << " | "
         << notch_cell(r) << " | " << r.runs << " |\n";
    }
    if (t.pairwise) {
      os << "\nRank grouping (Welch t-tests, Bonferroni threshold " << csv::format_double(t.pairwise->threshold)
         << "): " << render_grouping(t.pairwise->grouping) << "\n";
    }
  }
  if (any_star)
    os << "\n*significant at p < " << alpha_text(report.alpha) << " against every randomized control\n";

  if (!report.reduced.empty()) {
    os << "\n## Reduced zero padding\n\n";
    os << "| Data | Features | Grid | Zero pads | HVA | Reduced HVA |\n";
    os << "|---|---|---|---|---|---|\n";
    for (const auto& r : report.reduced)
      os << "| " << r.data_label << " | " << r.original_features << " -> " << r.reduced_features << " | "
         << r.grid_side << "x" << r.grid_side << " | " << r.zero_pad_cells << " | " << fixed3(r.original_accuracy)
         << " | " << fixed3(r.reduced_accuracy) << " |\n";
  }
  if (report.autoencoder) {
    const auto& a = *report.autoencoder;
    os << "\n## Auto-encoder\n\n";
    os << "| Auto-encoder SA (" << a.code_dim << " codes) | Fundamental SA | Ratio SA |\n";
    os << "|---|---|---|\n";
    os << "| " << fixed3(a.autoencoder_accuracy) << " | " << (a.fundamental_sa ? fixed3(*a.fundamental_sa) : "n/a")
       << " | " << (a.ratio_sa ? fixed3(*a.ratio_sa) : "n/a") << " |\n";
  }
  return os.str();
}

std::string render_csv(const ExperimentReport& report) {
  std::ostringstream os;
  csv::write_row(os, {"table", "method", "Accuracy", "Notch Distance", "runs", "significant"});
  for (const auto& t : report.tables)
    for (const auto& r : t.rows)
      csv::write_row(os, {t.title, std::string(display_name(r.method)),
                          format_cell(r.accuracy, r.accuracy_se, r.significant), notch_cell(r),
                          std::to_string(r.runs), r.significant ? "1" : "0"});
  for (const auto& r : report.reduced)
    csv::write_row(os, {"Reduced zero padding: " + r.data_label, "HVA " + std::to_string(r.original_features) + " -> " +
                        std::to_string(r.reduced_features),
                        fixed3(r.original_accuracy) + " -> " + fixed3(r.reduced_accuracy), "",
                        "", std::to_string(r.zero_pad_cells) + " zero pads"});
  if (report.autoencoder) {
    const auto& a = *report.autoencoder;
    csv::write_row(os, {"Auto-encoder", "Auto-encoder SA", fixed3(a.autoencoder_accuracy), "", "", ""});
    if (a.fundamental_sa) csv::write_row(os, {"Auto-encoder", "Fundamental SA", fixed3(*a.fundamental_sa), "", "", ""});
    if (a.ratio_sa) csv::write_row(os, {"Auto-encoder", "Ratio SA", fixed3(*a.ratio_sa), "", "", ""});
  }
  return os.str();
}

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, ReportFormat format,
                                               const std::filesystem::path& dir) {
  if (report.tables.empty()) fail(Errc::validation, "report has no tables");
  for (const auto& t : report.tables)
    if (t.rows.empty()) fail(Errc::validation, "report table '" + t.title + "' has no methods");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(Errc::io, "cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  const auto emit = [&](const std::filesystem::path& p, const std::string& text) {
    write_file(p, text);
    written.push_back(p);
  };
  if (format == ReportFormat::markdown)
    emit(dir / "report.md", render_markdown(report));
  else
    emit(dir / "report.csv", render_csv(report));

  std::ostringstream runs;
  csv::write_row(runs, {"table", "method", "run", "arrangement_seed", "train_seed", "accuracy", "expected_notch",
                        "conditional_notch", "macro_precision", "macro_recall", "macro_f1"});
  for (const auto& t : report.tables)
    for (const auto& res : t.results)
      for (const auto& r : res.runs)
        csv::write_row(runs, {t.title, std::string(to_string(r.method)), std::to_string(r.run),
                              std::to_string(r.arrangement_seed), std::to_string(r.train_seed),
                              csv::format_double(r.metrics.accuracy), csv::format_double(r.metrics.expected_notch),
                              optional_number(r.metrics.conditional_notch),
                              csv::format_double(r.metrics.macro.precision),
                              csv::format_double(r.metrics.macro.recall), csv::format_double(r.metrics.macro.f1)});
  emit(dir / "runs.csv", runs.str());

  std::ostringstream sig;
  csv::write_row(sig, {"table", "method", "control", "reference", "control_mean", "t", "df", "p", "significant"});
  for (const auto& t : report.tables)
    for (const auto& r : t.rows)
      for (const auto& c : r.tests)
        csv::write_row(sig, {t.title, std::string(to_string(r.method)), std::string(to_string(c.control)),
                             csv::format_double(c.reference), csv::format_double(c.control_mean),
                             std::isnan(c.test.t) ? "" : csv::format_double(c.test.t),
                             csv::format_double(c.test.df), std::isnan(c.test.p) ? "" : csv::format_double(c.test.p),
                             r.significant ? "1" : "0"});
  emit(dir / "significance.csv", sig.str());

  for (std::size_t i = 0; i < report.tables.size(); ++i)
    if (report.tables[i].pairwise) {
      const auto p = dir / ("pairwise_" + std::to_string(i + 1) + ".csv");
      write_pairwise_csv(*report.tables[i].pairwise, p);
      written.push_back(p);
    }
  return written;
}

}  // namespace finimg::experiment
