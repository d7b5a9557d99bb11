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

namespace finimg {

// Order-n Hilbert curve over a 2^n x 2^n lattice.
struct HilbertOrder {
  int n = 1;

  std::int64_t side() const noexcept { return std::int64_t{1} << n; }
  std::int64_t capacity() const noexcept { return side() * side(); }
};

struct HilbertPoint {
  std::int64_t x = 0;
  std::int64_t y = 0;

  bool operator==(const HilbertPoint&) const = default;
};

// Smallest order whose capacity 4^n holds `count` points (minimum order 1).
HilbertOrder hilbert_order_for(std::int64_t count);

// Curve position -> lattice coordinate. Origin is the lower-left cell and the
// order-1 sequence is (0,0) (0,1) (1,1) (1,0); higher orders follow the
// usual rotate-and-reflect recursion, ending at (side-1, 0).
HilbertPoint hilbert_d2xy(HilbertOrder order, std::int64_t index);

// Lattice coordinate -> curve position; inverse of hilbert_d2xy.
std::int64_t hilbert_xy2d(HilbertOrder order, std::int64_t x, std::int64_t y);

}  // namespace finimg
