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
#include <vector>

#include "finimg/dataset.hpp"
#include "finimg/schema.hpp"

namespace finimg {

// Planted-structure stand-in for proprietary rating data.
//
// Every observation draws one factor F_s ~ N(0, 1) per schema section. A
// feature in section s is
//
//   x = offset + scale * (strength * loading * F_s + sqrt(1 - strength^2) * e)
//
// with loading +1 on the first half of the section's features and -1 on the
// second half, so neighbouring features in a section-ordered layout share
// their sign. The latent score is z = sum_s weight_s * F_s + noise * e', and
// each year's observations are ranked by z and cut into 12 equal-count
// classes (class 0 = highest score).
struct SyntheticSpec {
  int n_per_year = 240;
  int first_year = 2000;
  int last_year = 2015;
  DatasetKind kind = DatasetKind::fundamental;
  double factor_strength = 0.9;
  double noise = 0.5;
  // Each feature gets a missing probability drawn from U(0, missing_rate).
  double missing_rate = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Generation parameters, exposed so tests can rebuild the latent score.
struct SyntheticTruth {
  std::vector<double> loading;  // per feature
  std::vector<double> scale;    // per feature
  std::vector<double> offset;   // per feature
  std::vector<double> weight;   // per section
  std::vector<std::vector<double>> factors;  // per observation, per section
  std::vector<double> latent;                // per observation
};

struct SyntheticData {
  Dataset dataset;
  SyntheticTruth truth;
};

SyntheticData generate_synthetic_with_truth(const SyntheticSpec& spec);
Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace finimg
