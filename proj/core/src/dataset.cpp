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

#include "finimg/dataset.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>

#include "finimg/csv.hpp"
#include "finimg/error.hpp"

namespace finimg {

namespace {

bool same_value(double a, double b) noexcept {
  if (is_missing(a) || is_missing(b)) return is_missing(a) && is_missing(b);
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

}  // namespace

bool same_observation(const Observation& a, const Observation& b) noexcept {
  if (a.entity_id != b.entity_id || !(a.period == b.period) || a.label != b.label) return false;
  if (a.values.size() != b.values.size()) return false;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    if (!same_value(a.values[i], b.values[i])) return false;
  return true;
}

Dataset::Dataset(FeatureSchema schema, std::vector<Observation> observations)
    : schema_(std::move(schema)), observations_(std::move(observations)) {
  for (std::size_t i = 0; i < observations_.size(); ++i) {
    const auto& o = observations_[i];
    if (o.values.size() != schema_.size())
      fail(Errc::schema_mismatch, "observation " + std::to_string(i) + " has " +
                                      std::to_string(o.values.size()) + " values, schema has " +
                                      std::to_string(schema_.size()));
    if (o.label < 0 || o.label >= kRatingClasses)
      fail(Errc::out_of_range, "observation " + std::to_string(i) + " label " +
                                   std::to_string(o.label) + " outside 0..11");
    if (o.period.quarter < 1 || o.period.quarter > 4)
      fail(Errc::out_of_range, "observation " + std::to_string(i) + " quarter outside 1..4");
  }
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(observations_.size());
  for (const auto& o : observations_) out.push_back(o.label);
  return out;
}

std::vector<double> Dataset::value_matrix() const {
  std::vector<double> out;
  out.reserve(observations_.size() * schema_.size());
  for (const auto& o : observations_) out.insert(out.end(), o.values.begin(), o.values.end());
  return out;
}

Dataset Dataset::select_features(std::span<const int> keep, FeatureSchema schema) const {
  if (schema.size() != keep.size())
    fail(Errc::schema_mismatch, "selected schema size does not match kept columns");
  std::vector<Observation> obs;
  obs.reserve(observations_.size());
  for (const auto& o : observations_) {
    Observation copy{o.entity_id, o.period, {}, o.label};
    copy.values.reserve(keep.size());
    for (const int k : keep) copy.values.push_back(o.values.at(static_cast<std::size_t>(k)));
    obs.push_back(std::move(copy));
  }
  return Dataset(std::move(schema), std::move(obs));
}

bool Dataset::identical_to(const Dataset& other) const {
  if (!(schema_ == other.schema_) || observations_.size() != other.observations_.size())
    return false;
  for (std::size_t i = 0; i < observations_.size(); ++i)
    if (!same_observation(observations_[i], other.observations_[i])) return false;
  return true;
}

TrainTestSplit out_of_time_split(const Dataset& ds, int test_year) {
  if (ds.empty()) fail(Errc::invalid_argument, "cannot split an empty dataset");
  std::vector<Observation> train;
  std::vector<Observation> test;
  for (const auto& o : ds.observations()) {
    if (o.period.year < test_year) {
      train.push_back(o);
    } else if (o.period.year == test_year) {
      test.push_back(o);
    }
  }
  if (test.empty())
    fail(Errc::empty_test, "no observations in test year " + std::to_string(test_year));
  return {Dataset(ds.schema(), std::move(train)), Dataset(ds.schema(), std::move(test))};
}

StandardizationParams fit_standardizer(const Dataset& train) {
  if (train.empty()) fail(Errc::invalid_argument, "cannot fit standardizer on empty data");
  const std::size_t d = train.schema().size();
  std::vector<double> sum(d, 0.0);
  std::vector<std::size_t> count(d, 0);
  for (const auto& o : train.observations()) {
    for (std::size_t j = 0; j < d; ++j) {
      if (!is_missing(o.values[j])) {
        sum[j] += o.values[j];
        ++count[j];
      }
    }
  }
  StandardizationParams params;
  params.features.resize(d);
  for (std::size_t j = 0; j < d; ++j)
    if (count[j]) params.features[j].mean = sum[j] / static_cast<double>(count[j]);

  // Second pass on centred values keeps the variance numerically stable.
  std::vector<double> sq(d, 0.0);
  for (const auto& o : train.observations()) {
    for (std::size_t j = 0; j < d; ++j) {
      if (!is_missing(o.values[j])) {
        const double c = o.values[j] - params.features[j].mean;
        sq[j] += c * c;
      }
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = count[j] ? std::sqrt(sq[j] / static_cast<double>(count[j])) : 0.0;
    params.features[j].stddev = (sd > 0.0 && std::isfinite(sd)) ? sd : 1.0;
  }
  return params;
}

Dataset apply_standardizer(const Dataset& ds, const StandardizationParams& params) {
  if (params.features.size() != ds.schema().size())
    fail(Errc::schema_mismatch, "standardizer has " + std::to_string(params.features.size()) +
                                    " features, dataset has " + std::to_string(ds.schema().size()));
  std::vector<Observation> obs = ds.observations();
  for (auto& o : obs) {
    for (std::size_t j = 0; j < o.values.size(); ++j) {
      const auto& f = params.features[j];
      o.values[j] = is_missing(o.values[j]) ? 0.0 : (o.values[j] - f.mean) / f.stddev;
    }
  }
  return Dataset(ds.schema(), std::move(obs));
}

Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                 const RatingScale& scale) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open data file " + path.string());
  csv::Reader reader(in);
  std::vector<std::string> row;
  const std::string where = path.string() + ":";
  if (!reader.next(row)) fail(Errc::parse, where + "1: empty data file");

  static constexpr std::array<std::string_view, 4> kFixed = {"id", "year", "quarter", "rating"};
  if (row.size() != kFixed.size() + schema.size())
    fail(Errc::parse, where + "1: header has " + std::to_string(row.size()) + " columns, expected " +
                          std::to_string(kFixed.size() + schema.size()));
  for (std::size_t c = 0; c < row.size(); ++c) {
    const std::string_view expected =
        c < kFixed.size() ? kFixed[c] : std::string_view(schema[c - kFixed.size()].name);
    if (csv::trim(row[c]) != expected)
      fail(Errc::parse, where + "1: column " + std::to_string(c + 1) + " is '" + row[c] +
                            "', expected '" + std::string(expected) + "'");
  }

  std::vector<Observation> obs;
  while (reader.next(row)) {
    const auto loc = [&](std::size_t col) {
      return where + std::to_string(reader.line()) + ":" + std::to_string(col + 1) + ": ";
    };
    if (row.size() != kFixed.size() + schema.size())
      fail(Errc::parse, loc(0) + "expected " + std::to_string(kFixed.size() + schema.size()) +
                            " fields, got " + std::to_string(row.size()));
    Observation o;
    o.entity_id = std::string(csv::trim(row[0]));
    const auto year = csv::parse_int(row[1]);
    if (!year) fail(Errc::parse, loc(1) + "invalid year '" + row[1] + "'");
    const auto quarter = csv::parse_int(row[2]);
    if (!quarter || *quarter < 1 || *quarter > 4)
      fail(Errc::parse, loc(2) + "invalid quarter '" + row[2] + "'");
    o.period = {static_cast<int>(*year), static_cast<int>(*quarter)};
    try {
      o.label = scale.map(row[3]);
    } catch (const Error& e) {
      throw Error(Errc::unknown_rating, loc(3) + e.what());
    }
    o.values.reserve(schema.size());
    for (std::size_t j = 0; j < schema.size(); ++j) {
      const auto& cell = row[kFixed.size() + j];
      if (csv::trim(cell).empty()) {
        o.values.push_back(kMissing);
        continue;
      }
      const auto v = csv::parse_double(cell);
      if (!v) fail(Errc::parse, loc(kFixed.size() + j) + "invalid number '" + cell + "'");
      o.values.push_back(*v);
    }
    obs.push_back(std::move(o));
  }
  return Dataset(schema, std::move(obs));
}

void save_csv(const Dataset& ds, const std::filesystem::path& path, const RatingScale& scale) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write data file " + path.string());
  out << "id,year,quarter,rating";
  for (const auto& f : ds.schema().features()) {
    out << ',';
    csv::write_field(out, f.name);
  }
  out << '\n';
  for (const auto& o : ds.observations()) {
    csv::write_field(out, o.entity_id);
    out << ',' << o.period.year << ',' << o.period.quarter << ',' << scale.representative(o.label);
    for (const double v : o.values) {
      out << ',';
      if (!is_missing(v)) out << csv::format_double(v);
    }
    out << '\n';
  }
  if (!out) fail(Errc::io, "write failed for " + path.string());
}

}  // namespace finimg
