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

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace finimg {

enum class DatasetKind { fundamental, ratio, generic };

std::string_view to_string(DatasetKind kind) noexcept;

struct Feature {
  std::string name;
  std::string section;

  bool operator==(const Feature&) const = default;
};

// Section labels of the restructured fundamental data, in canonical order.
std::span<const std::string_view> fundamental_sections() noexcept;
// Category labels of the financial ratio data, in canonical order.
std::span<const std::string_view> ratio_sections() noexcept;

// Ordered feature list with one section label per feature.
//
// For fundamental and ratio schemas the section order is the canonical table
// order; for generic schemas it is the order of first appearance. Section
// order drives the chunk layout of the category-chunk encodings.
class FeatureSchema {
 public:
  FeatureSchema() = default;
  FeatureSchema(std::vector<Feature> features, DatasetKind kind);

  // Infers the kind from the labels: all-fundamental, all-ratio, else generic.
  static FeatureSchema infer(std::vector<Feature> features);

  // 332 features in 6 sections of (78, 45, 75, 33, 49, 52).
  static FeatureSchema canonical_fundamental();
  // 69 features in 8 categories of (13, 15, 4, 16, 6, 4, 7, 4).
  static FeatureSchema canonical_ratio();
  static FeatureSchema canonical(DatasetKind kind);

  static FeatureSchema load_csv(const std::filesystem::path& path);
  void save_csv(const std::filesystem::path& path) const;

  std::size_t size() const noexcept { return features_.size(); }
  bool empty() const noexcept { return features_.empty(); }
  DatasetKind kind() const noexcept { return kind_; }
  const std::vector<Feature>& features() const noexcept { return features_; }
  const Feature& operator[](std::size_t i) const { return features_[i]; }

  const std::vector<std::string>& sections() const noexcept { return sections_; }
  // Feature indices belonging to each entry of sections(), in schema order.
  const std::vector<std::vector<int>>& section_members() const noexcept { return members_; }
  std::vector<std::size_t> section_counts() const;

  // Schema restricted to `keep` (ascending indices), preserving order.
  FeatureSchema subset(std::span<const int> keep) const;

  bool operator==(const FeatureSchema& other) const {
    return kind_ == other.kind_ && features_ == other.features_;
  }

 private:
  std::vector<Feature> features_;
  DatasetKind kind_ = DatasetKind::generic;
  std::vector<std::string> sections_;
  std::vector<std::vector<int>> members_;
};

}  // namespace finimg
