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

#include "finimg/rating.hpp"

#include "finimg/csv.hpp"
#include "finimg/error.hpp"

namespace finimg {

namespace {

constexpr std::array<std::string_view, 24> kRatings = {
    "AAA",  "AA+", "AA",   "AA-", "A+", "A",  "A-", "BBB+", "BBB", "BBB-", "BB+", "BB",
    "BB-",  "B+",  "B",    "B-",  "CCC+", "CCC", "CCC-", "CC", "C",   "D",    "SD",  "N.M.",
};
constexpr std::array<int, 24> kClasses = {
    0, 0, 1, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 10, 10, 10, 11, 11, 11, 11, 11, 11, 11, 11,
};
constexpr std::array<std::string_view, kRatingClasses> kDescriptions = {
    "Prime",
    "High grade",
    "Upper medium grade",
    "Upper medium grade",
    "Upper medium grade",
    "Lower medium grade",
    "Lower medium grade",
    "Lower medium grade",
    "Non-investment grade speculative",
    "Non-investment grade speculative",
    "Highly speculative",
    "Extremely risky",
};
constexpr std::array<std::string_view, kRatingClasses> kRepresentatives = {
    "AAA", "AA", "A+", "A", "A-", "BBB+", "BBB", "BBB-", "BB+", "BB", "B", "CCC",
};

}  // namespace

RatingScale::RatingScale() : ordered_(kRatings) {
  for (std::size_t i = 0; i < kRatings.size(); ++i) mapping_.emplace(kRatings[i], kClasses[i]);
}

const RatingScale& RatingScale::standard() {
  static const RatingScale scale;
  return scale;
}

bool RatingScale::contains(std::string_view raw) const {
  return mapping_.contains(csv::trim(raw));
}

int RatingScale::map(std::string_view raw) const {
  const auto it = mapping_.find(csv::trim(raw));
  if (it == mapping_.end()) fail(Errc::unknown_rating, "unknown rating '" + std::string(raw) + "'");
  return it->second;
}

std::string_view RatingScale::description(int class_index) const {
  if (class_index < 0 || class_index >= kRatingClasses)
    fail(Errc::out_of_range, "rating class " + std::to_string(class_index) + " out of range");
  return kDescriptions[static_cast<std::size_t>(class_index)];
}

std::string_view RatingScale::representative(int class_index) const {
  if (class_index < 0 || class_index >= kRatingClasses)
    fail(Errc::out_of_range, "rating class " + std::to_string(class_index) + " out of range");
  return kRepresentatives[static_cast<std::size_t>(class_index)];
}

}  // namespace finimg
