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

#include "finimg/hilbert.hpp"

#include <string>
#include <utility>

#include "finimg/error.hpp"

namespace finimg {

namespace {

void check_order(HilbertOrder order) {
  if (order.n < 1 || order.n > 30)
    fail(Errc::out_of_range, "Hilbert order " + std::to_string(order.n) + " outside 1..30");
}

// Rotates/reflects a quadrant so the sub-curve is traversed in the right
// orientation.
void rotate(std::int64_t s, std::int64_t& x, std::int64_t& y, std::int64_t rx, std::int64_t ry) {
  if (ry == 0) {
    if (rx == 1) {
      x = s - 1 - x;
      y = s - 1 - y;
    }
    std::swap(x, y);
  }
}

}  // namespace

HilbertOrder hilbert_order_for(std::int64_t count) {
  HilbertOrder order{1};
  while (order.capacity() < count) ++order.n;
  return order;
}

HilbertPoint hilbert_d2xy(HilbertOrder order, std::int64_t index) {
  check_order(order);
  if (index < 0 || index >= order.capacity())
    fail(Errc::out_of_range, "Hilbert index " + std::to_string(index) + " outside 0.." +
                                 std::to_string(order.capacity() - 1));
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t t = index;
  for (std::int64_t s = 1; s < order.side(); s *= 2) {
    const std::int64_t rx = 1 & (t / 2);
    const std::int64_t ry = 1 & (t ^ rx);
    rotate(s, x, y, rx, ry);
    x += s * rx;
    y += s * ry;
    t /= 4;
  }
  return {x, y};
}

std::int64_t hilbert_xy2d(HilbertOrder order, std::int64_t x, std::int64_t y) {
  check_order(order);
  const std::int64_t side = order.side();
  if (x < 0 || y < 0 || x >= side || y >= side)
    fail(Errc::out_of_range, "Hilbert coordinate (" + std::to_string(x) + "," + std::to_string(y) +
                                 ") outside the " + std::to_string(side) + "x" +
                                 std::to_string(side) + " lattice");
  std::int64_t d = 0;
  for (std::int64_t s = side / 2; s > 0; s /= 2) {
    const std::int64_t rx = (x & s) > 0 ? 1 : 0;
    const std::int64_t ry = (y & s) > 0 ? 1 : 0;
    d += s * s * ((3 * rx) ^ ry);
    rotate(side, x, y, rx, ry);
  }
  return d;
}

}  // namespace finimg
