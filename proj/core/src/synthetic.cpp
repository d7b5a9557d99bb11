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

#include "finimg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "finimg/error.hpp"
#include "finimg/rating.hpp"
#include "finimg/rng.hpp"

namespace finimg {

void SyntheticSpec::validate() const {
  if (n_per_year < kRatingClasses)
    fail(Errc::invalid_argument, "n_per_year must be at least 12 so every class occurs");
  if (first_year > last_year) fail(Errc::invalid_argument, "first_year is after last_year");
  if (kind == DatasetKind::generic) fail(Errc::invalid_argument, "synthetic data needs a fundamental or ratio schema");
  if (!(factor_strength >= 0.0 && factor_strength <= 1.0))
    fail(Errc::invalid_argument, "factor_strength must be in [0, 1]");
  if (!(noise >= 0.0) || !std::isfinite(noise)) fail(Errc::invalid_argument, "noise must be non-negative");
  if (!(missing_rate >= 0.0 && missing_rate < 1.0))
    fail(Errc::invalid_argument, "missing_rate must be in [0, 1)");
}

SyntheticData generate_synthetic_with_truth(const SyntheticSpec& spec) {
  spec.validate();
  FeatureSchema schema = FeatureSchema::canonical(spec.kind);
  const std::size_t d = schema.size();
  const auto& members = schema.section_members();
  const std::size_t sections = members.size();

  SyntheticTruth truth;
  truth.loading.assign(d, 0.0);
  truth.scale.assign(d, 1.0);
  truth.offset.assign(d, 0.0);
  std::vector<double> missing_p(d, 0.0);
  std::vector<std::size_t> section_of(d, 0);

  Rng param_rng(derive_seed(spec.seed, 10));
  for (std::size_t s = 0; s < sections; ++s) {
    const auto& m = members[s];
    for (std::size_t k = 0; k < m.size(); ++k) {
      const auto j = static_cast<std::size_t>(m[k]);
      truth.loading[j] = 2 * k < m.size() ? 1.0 : -1.0;
      section_of[j] = s;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    truth.scale[j] = std::exp(param_rng.uniform(-1.0, 1.0));
    truth.offset[j] = param_rng.uniform(-2.0, 2.0);
    missing_p[j] = param_rng.uniform(0.0, spec.missing_rate);
  }
  truth.weight.resize(sections);
  for (auto& w : truth.weight) w = param_rng.uniform(0.5, 1.5);

  const double idio = std::sqrt(std::max(0.0, 1.0 - spec.factor_strength * spec.factor_strength));
  Rng rng(derive_seed(spec.seed, 11));
  std::vector<Observation> observations;

  for (int year = spec.first_year; year <= spec.last_year; ++year) {
    const std::size_t first = observations.size();
    for (int i = 0; i < spec.n_per_year; ++i) {
      Observation o;
      char id[32];
      std::snprintf(id, sizeof id, "E%05d", i / 4);
      o.entity_id = id;
      o.period = {year, i % 4 + 1};
      std::vector<double> f(sections);
      for (auto& v : f) v = rng.normal();
      double z = 0.0;
      for (std::size_t s = 0; s < sections; ++s) z += truth.weight[s] * f[s];
      z += spec.noise * rng.normal();
      o.values.resize(d);
      for (std::size_t j = 0; j < d; ++j) {
        const double core = spec.factor_strength * truth.loading[j] * f[section_of[j]] + idio * rng.normal();
        const double v = truth.offset[j] + truth.scale[j] * core;
        o.values[j] = rng.bernoulli(missing_p[j]) ? kMissing : v;
      }
      truth.factors.push_back(std::move(f));
      truth.latent.push_back(z);
      observations.push_back(std::move(o));
    }
    // Rank within the year; ties broken by position.
    std::vector<std::size_t> order(static_cast<std::size_t>(spec.n_per_year));
    std::iota(order.begin(), order.end(), first);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return truth.latent[a] > truth.latent[b]; });
    const auto n = static_cast<std::size_t>(spec.n_per_year);
    for (std::size_t r = 0; r < n; ++r)
      observations[order[r]].label = static_cast<int>(r * kRatingClasses / n);
  }
  return {Dataset(std::move(schema), std::move(observations)), std::move(truth)};
}

Dataset generate_synthetic(const SyntheticSpec& spec) { return generate_synthetic_with_truth(spec).dataset; }

}  // namespace finimg
