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

#include <array>
#include <string>
#include <string_view>
#include <unordered_map>

namespace finimg {

inline constexpr int kRatingClasses = 12;

// S&P letter ratings collapsed onto 12 risk classes (0 = prime, 11 = CCC and
// below). The mapping is total over the 24 recognised rating strings.
class RatingScale {
 public:
  static const RatingScale& standard();

  // Trims surrounding whitespace; matching is case-sensitive.
  int map(std::string_view raw) const;
  bool contains(std::string_view raw) const;

  std::string_view description(int class_index) const;
  // A raw rating that maps back onto `class_index`; used when writing CSV.
  std::string_view representative(int class_index) const;

  // Raw ratings in best-to-worst order.
  const std::array<std::string_view, 24>& ordered_ratings() const noexcept { return ordered_; }

 private:
  RatingScale();

  std::array<std::string_view, 24> ordered_;
  std::unordered_map<std::string_view, int> mapping_;
};

inline int map_rating(std::string_view raw, const RatingScale& scale = RatingScale::standard()) {
  return scale.map(raw);
}

}  // namespace finimg
