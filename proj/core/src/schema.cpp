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

#include "finimg/schema.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "finimg/csv.hpp"
#include "finimg/error.hpp"

namespace finimg {

namespace {

constexpr std::array<std::string_view, 6> kFundamentalSections = {
    "Balance Sheet Data",
    "Balance Sheet Supplemental Data",
    "Income Statement Data",
    "Income Statement Supplemental Data",
    "Special Items",
    "Standard & Poor's Core Earnings",
};
constexpr std::array<int, 6> kFundamentalCounts = {78, 45, 75, 33, 49, 52};
constexpr std::array<std::string_view, 6> kFundamentalPrefixes = {"bs", "bss", "is",
                                                                  "iss", "si", "ce"};

constexpr std::array<std::string_view, 8> kRatioSections = {
    "Valuation", "Profitability", "Capitalization", "Financial Soundness",
    "Solvency",  "Liquidity",     "Efficiency",     "Other",
};
constexpr std::array<int, 8> kRatioCounts = {13, 15, 4, 16, 6, 4, 7, 4};
constexpr std::array<std::string_view, 8> kRatioPrefixes = {"val", "prof", "cap", "fsnd",
                                                            "solv", "liq", "eff", "oth"};

template <std::size_t N>
bool all_in(const std::vector<Feature>& features, const std::array<std::string_view, N>& labels) {
  return std::all_of(features.begin(), features.end(), [&](const Feature& f) {
    return std::find(labels.begin(), labels.end(), f.section) != labels.end();
  });
}

template <std::size_t N>
std::vector<Feature> make_features(const std::array<std::string_view, N>& sections,
                                   const std::array<int, N>& counts,
                                   const std::array<std::string_view, N>& prefixes) {
  std::vector<Feature> out;
  for (std::size_t s = 0; s < N; ++s) {
    for (int j = 0; j < counts[s]; ++j) {
      char name[32];
      std::snprintf(name, sizeof(name), "%.*s_%03d", static_cast<int>(prefixes[s].size()),
                    prefixes[s].data(), j + 1);
      out.push_back({name, std::string(sections[s])});
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(DatasetKind kind) noexcept {
  switch (kind) {
    case DatasetKind::fundamental: return "fundamental";
    case DatasetKind::ratio: return "ratio";
    case DatasetKind::generic: return "generic";
  }
  return "generic";
}

std::span<const std::string_view> fundamental_sections() noexcept { return kFundamentalSections; }
std::span<const std::string_view> ratio_sections() noexcept { return kRatioSections; }

FeatureSchema::FeatureSchema(std::vector<Feature> features, DatasetKind kind)
    : features_(std::move(features)), kind_(kind) {
  std::unordered_set<std::string> names;
  for (const auto& f : features_) {
    if (f.name.empty()) fail(Errc::validation, "feature with empty name");
    if (f.section.empty()) fail(Errc::validation, "feature '" + f.name + "' has no section");
    if (!names.insert(f.name).second) fail(Errc::validation, "duplicate feature name '" + f.name + "'");
  }

  std::span<const std::string_view> canonical;
  if (kind_ == DatasetKind::fundamental) {
    if (!all_in(features_, kFundamentalSections))
      fail(Errc::validation, "fundamental schema uses a non-fundamental section label");
    canonical = kFundamentalSections;
  } else if (kind_ == DatasetKind::ratio) {
    if (!all_in(features_, kRatioSections))
      fail(Errc::validation, "ratio schema uses a non-ratio category label");
    canonical = kRatioSections;
  }

  if (!canonical.empty()) {
    for (const auto label : canonical) {
      std::vector<int> idx;
      for (std::size_t i = 0; i < features_.size(); ++i)
        if (features_[i].section == label) idx.push_back(static_cast<int>(i));
      if (!idx.empty()) {
        sections_.emplace_back(label);
        members_.push_back(std::move(idx));
      }
    }
  } else {
    for (std::size_t i = 0; i < features_.size(); ++i) {
      const auto& label = features_[i].section;
      const auto it = std::find(sections_.begin(), sections_.end(), label);
      if (it == sections_.end()) {
        sections_.push_back(label);
        members_.push_back({static_cast<int>(i)});
      } else {
        members_[static_cast<std::size_t>(it - sections_.begin())].push_back(static_cast<int>(i));
      }
    }
  }
}

FeatureSchema FeatureSchema::infer(std::vector<Feature> features) {
  DatasetKind kind = DatasetKind::generic;
  if (!features.empty()) {
    if (all_in(features, kFundamentalSections)) {
      kind = DatasetKind::fundamental;
    } else if (all_in(features, kRatioSections)) {
      kind = DatasetKind::ratio;
    }
  }
  return FeatureSchema(std::move(features), kind);
}

FeatureSchema FeatureSchema::canonical_fundamental() {
  return FeatureSchema(make_features(kFundamentalSections, kFundamentalCounts, kFundamentalPrefixes),
                       DatasetKind::fundamental);
}

FeatureSchema FeatureSchema::canonical_ratio() {
  return FeatureSchema(make_features(kRatioSections, kRatioCounts, kRatioPrefixes),
                       DatasetKind::ratio);
}

FeatureSchema FeatureSchema::canonical(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::fundamental: return canonical_fundamental();
    case DatasetKind::ratio: return canonical_ratio();
    case DatasetKind::generic: break;
  }
  fail(Errc::invalid_argument, "no canonical schema for generic datasets");
}

std::vector<std::size_t> FeatureSchema::section_counts() const {
  std::vector<std::size_t> counts;
  counts.reserve(members_.size());
  for (const auto& m : members_) counts.push_back(m.size());
  return counts;
}

FeatureSchema FeatureSchema::subset(std::span<const int> keep) const {
  std::vector<Feature> kept;
  kept.reserve(keep.size());
  int prev = -1;
  for (const int i : keep) {
    if (i <= prev || i >= static_cast<int>(features_.size()))
      fail(Errc::invalid_argument, "subset indices must be ascending and in range");
    kept.push_back(features_[static_cast<std::size_t>(i)]);
    prev = i;
  }
  return FeatureSchema(std::move(kept), kind_);
}

FeatureSchema FeatureSchema::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open schema file " + path.string());
  csv::Reader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row)) fail(Errc::parse, path.string() + ": empty schema file");
  if (row.size() != 2 || csv::trim(row[0]) != "name" || csv::trim(row[1]) != "section")
    fail(Errc::parse, path.string() + ":1: schema header must be 'name,section'");
  std::vector<Feature> features;
  while (reader.next(row)) {
    if (row.size() != 2)
      fail(Errc::parse, path.string() + ":" + std::to_string(reader.line()) +
                            ": expected 2 columns, got " + std::to_string(row.size()));
    features.push_back({std::string(csv::trim(row[0])), std::string(csv::trim(row[1]))});
  }
  return infer(std::move(features));
}

void FeatureSchema::save_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write schema file " + path.string());
  out << "name,section\n";
  for (const auto& f : features_) csv::write_row(out, {f.name, f.section});
  if (!out) fail(Errc::io, "write failed for " + path.string());
}

}  // namespace finimg
