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

#include <cmath>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "finimg/rating.hpp"
#include "finimg/schema.hpp"

namespace finimg {

// Missing feature values are stored as quiet NaN.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) noexcept { return std::isnan(v); }

struct Period {
  int year = 0;
  int quarter = 1;

  bool operator==(const Period&) const = default;
};

struct Observation {
  std::string entity_id;
  Period period;
  std::vector<double> values;
  int label = 0;
};

bool same_observation(const Observation& a, const Observation& b) noexcept;

class Dataset {
 public:
  Dataset() = default;
  Dataset(FeatureSchema schema, std::vector<Observation> observations);

  const FeatureSchema& schema() const noexcept { return schema_; }
  const std::vector<Observation>& observations() const noexcept { return observations_; }
  std::size_t size() const noexcept { return observations_.size(); }
  bool empty() const noexcept { return observations_.empty(); }
  const Observation& operator[](std::size_t i) const { return observations_[i]; }

  std::vector<int> labels() const;
  // Row-major (size() x schema().size()) copy of the values.
  std::vector<double> value_matrix() const;

  // Keeps only the listed feature columns under `schema`.
  Dataset select_features(std::span<const int> keep, FeatureSchema schema) const;

  bool identical_to(const Dataset& other) const;

 private:
  FeatureSchema schema_;
  std::vector<Observation> observations_;
};

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

// Train = years before test_year, test = test_year, later years discarded.
TrainTestSplit out_of_time_split(const Dataset& ds, int test_year);

struct FeatureScaling {
  double mean = 0.0;
  double stddev = 1.0;

  bool operator==(const FeatureScaling&) const = default;
};

struct StandardizationParams {
  std::vector<FeatureScaling> features;

  bool operator==(const StandardizationParams&) const = default;
};

// Population mean/stddev over non-missing training values; a zero or
// undefined stddev is reported as 1.
StandardizationParams fit_standardizer(const Dataset& train);
// z-scores every value; missing values become exactly 0.
Dataset apply_standardizer(const Dataset& ds, const StandardizationParams& params);

// Header: id,year,quarter,rating,<feature names in schema order>.
Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                 const RatingScale& scale = RatingScale::standard());
void save_csv(const Dataset& ds, const std::filesystem::path& path,
              const RatingScale& scale = RatingScale::standard());

}  // namespace finimg
