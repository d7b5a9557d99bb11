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

#include "finimg/encoding.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "finimg/error.hpp"
#include "finimg/rng.hpp"

namespace finimg {

namespace {

constexpr std::array<std::string_view, 7> kMethodNames = {"sa", "ra", "cca", "wcr",
                                                          "bcr", "hva", "hvr"};

void check_values(std::span<const double> values, int feature_count) {
  if (static_cast<int>(values.size()) != feature_count)
    fail(Errc::shape_mismatch, "layout expects " + std::to_string(feature_count) +
                                   " values, got " + std::to_string(values.size()));
}

GridLayout empty_layout(int rows, int cols, int feature_count) {
  GridLayout layout;
  layout.rows = rows;
  layout.cols = cols;
  layout.feature_count = feature_count;
  layout.provenance.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
                           kZeroPad);
  return layout;
}

// Flat cell indices of chunk slot `slot`, row-major inside the chunk.
std::vector<std::size_t> chunk_cells(const ChunkGeometry& g, int slot) {
  const int r0 = (slot / g.grid_cols) * g.chunk_rows;
  const int c0 = (slot % g.grid_cols) * g.chunk_cols;
  std::vector<std::size_t> cells;
  cells.reserve(static_cast<std::size_t>(g.chunk_rows * g.chunk_cols));
  for (int r = 0; r < g.chunk_rows; ++r)
    for (int c = 0; c < g.chunk_cols; ++c)
      cells.push_back(static_cast<std::size_t>((r0 + r) * g.cols() + c0 + c));
  return cells;
}

void check_geometry(const ChunkGeometry& g) {
  if (g.chunk_rows < 1 || g.chunk_cols < 1 || g.grid_rows < 1 || g.grid_cols < 1)
    fail(Errc::invalid_argument, "chunk geometry dimensions must be positive");
}

// Chunk layout with each chunk's contents placed in the given slot.
GridLayout chunk_layout_with_slots(const FeatureSchema& schema, const ChunkGeometry& g,
                                   std::span<const int> slot_of_section) {
  check_geometry(g);
  const auto& members = schema.section_members();
  const int sections = static_cast<int>(members.size());
  if (sections > g.slots())
    fail(Errc::chunk_overflow, std::to_string(sections) + " sections do not fit a " +
                                   std::to_string(g.grid_rows) + "x" +
                                   std::to_string(g.grid_cols) + " chunk layout");
  const auto capacity = static_cast<std::size_t>(g.chunk_rows * g.chunk_cols);
  for (int s = 0; s < sections; ++s) {
    if (members[static_cast<std::size_t>(s)].size() > capacity)
      fail(Errc::chunk_overflow, "section '" + schema.sections()[static_cast<std::size_t>(s)] +
                                     "' has " + std::to_string(members[static_cast<std::size_t>(s)].size()) +
                                     " features, chunk holds " + std::to_string(capacity));
  }
  GridLayout layout = empty_layout(g.rows(), g.cols(), static_cast<int>(schema.size()));
  for (int s = 0; s < sections; ++s) {
    const auto cells = chunk_cells(g, slot_of_section[static_cast<std::size_t>(s)]);
    const auto& idx = members[static_cast<std::size_t>(s)];
    for (std::size_t k = 0; k < idx.size(); ++k) layout.provenance[cells[k]] = idx[k];
  }
  return layout;
}

GridLayout sequential_layout_of(std::span<const int> order, int rows, int cols) {
  const int d = static_cast<int>(order.size());
  if (rows < 1 || cols < 1) fail(Errc::invalid_argument, "grid dimensions must be positive");
  if (static_cast<long long>(rows) * cols < d)
    fail(Errc::capacity, std::to_string(d) + " features exceed a " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " grid");
  GridLayout layout = empty_layout(rows, cols, d);
  std::copy(order.begin(), order.end(), layout.provenance.begin());
  return layout;
}

GridLayout hilbert_layout_of(std::span<const int> order, int n) {
  const int d = static_cast<int>(order.size());
  if (d < 1) fail(Errc::invalid_argument, "Hilbert arrangement needs at least one feature");
  HilbertOrder h = n > 0 ? HilbertOrder{n} : hilbert_order_for(d);
  if (h.capacity() < d)
    fail(Errc::capacity, std::to_string(d) + " features exceed Hilbert order " +
                             std::to_string(h.n) + " capacity " + std::to_string(h.capacity()));
  const int side = static_cast<int>(h.side());
  GridLayout layout = empty_layout(side, side, d);
  for (int i = 0; i < d; ++i) {
    const auto p = hilbert_d2xy(h, i);
    // Lower-left origin: y grows upward, matrix rows grow downward.
    const auto row = static_cast<std::size_t>(side - 1 - p.y);
    const auto col = static_cast<std::size_t>(p.x);
    layout.provenance[row * static_cast<std::size_t>(side) + col] = order[static_cast<std::size_t>(i)];
  }
  return layout;
}

std::vector<int> identity_order(int d) {
  std::vector<int> order(static_cast<std::size_t>(std::max(d, 0)));
  std::iota(order.begin(), order.end(), 0);
  return order;
}

std::vector<int> identity_slots(const FeatureSchema& schema) {
  return identity_order(static_cast<int>(schema.sections().size()));
}

}  // namespace

std::string_view to_string(Method m) noexcept { return kMethodNames[static_cast<std::size_t>(m)]; }

std::optional<Method> parse_method(std::string_view text) noexcept {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (std::size_t i = 0; i < kMethodNames.size(); ++i)
    if (lower == kMethodNames[i]) return static_cast<Method>(i);
  return std::nullopt;
}

bool is_randomized(Method m) noexcept {
  return m == Method::ra || m == Method::wcr || m == Method::bcr || m == Method::hvr;
}

std::size_t ImageGrid::zero_pad_count() const {
  return static_cast<std::size_t>(std::count(provenance.begin(), provenance.end(), kZeroPad));
}

void GridLayout::render_into(std::span<const double> values, std::span<double> out) const {
  check_values(values, feature_count);
  if (out.size() != provenance.size())
    fail(Errc::shape_mismatch, "render target has wrong size");
  for (std::size_t i = 0; i < provenance.size(); ++i) {
    const int src = provenance[i];
    out[i] = src == kZeroPad ? 0.0 : values[static_cast<std::size_t>(src)];
  }
}

ImageGrid GridLayout::render(std::span<const double> values) const {
  ImageGrid grid;
  grid.rows = rows;
  grid.cols = cols;
  grid.provenance = provenance;
  grid.cells.resize(provenance.size());
  render_into(values, grid.cells);
  return grid;
}

ChunkGeometry default_chunk_geometry(const FeatureSchema& schema) {
  const auto counts = schema.section_counts();
  if (counts.empty()) fail(Errc::invalid_argument, "schema has no sections");
  const auto largest = *std::max_element(counts.begin(), counts.end());
  int side = 1;
  while (static_cast<std::size_t>(side * side) < largest) ++side;
  const int sections = static_cast<int>(counts.size());
  const int grid_rows = std::min(2, sections);
  const int grid_cols = (sections + grid_rows - 1) / grid_rows;
  return {side, side, grid_rows, grid_cols};
}

ArrangementSpec ArrangementSpec::defaults(Method method, const FeatureSchema& schema,
                                          std::uint64_t seed) {
  ArrangementSpec spec;
  spec.method = method;
  spec.seed = seed;
  spec.chunks = default_chunk_geometry(schema);
  spec.rows = spec.chunks.rows();
  spec.cols = spec.chunks.cols();
  if (static_cast<std::size_t>(spec.rows) * static_cast<std::size_t>(spec.cols) < schema.size()) {
    // Unbalanced generic schemas: fall back to a near-square canvas.
    const int d = static_cast<int>(schema.size());
    spec.rows = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(d)))));
    spec.cols = (d + spec.rows - 1) / spec.rows;
  }
  return spec;
}

GridLayout sequential_layout(int feature_count, int rows, int cols) {
  const auto order = identity_order(feature_count);
  return sequential_layout_of(order, rows, cols);
}

GridLayout chunk_layout(const FeatureSchema& schema, const ChunkGeometry& geometry) {
  const auto slots = identity_slots(schema);
  return chunk_layout_with_slots(schema, geometry, slots);
}

GridLayout hilbert_layout(int feature_count, int order) {
  const auto ids = identity_order(feature_count);
  return hilbert_layout_of(ids, order);
}

GridLayout make_layout(const ArrangementSpec& spec, const FeatureSchema& schema) {
  const int d = static_cast<int>(schema.size());
  switch (spec.method) {
    case Method::sa:
      return sequential_layout(d, spec.rows, spec.cols);
    case Method::ra: {
      const auto perm = random_permutation(static_cast<std::size_t>(d), spec.seed);
      return sequential_layout_of(perm, spec.rows, spec.cols);
    }
    case Method::cca:
      return chunk_layout(schema, spec.chunks);
    case Method::wcr: {
      GridLayout layout = chunk_layout(schema, spec.chunks);
      Rng rng(spec.seed);
      // Features and padding of each occupied chunk are shuffled together.
      for (std::size_t s = 0; s < schema.sections().size(); ++s) {
        const auto cells = chunk_cells(spec.chunks, static_cast<int>(s));
        std::vector<int> contents;
        contents.reserve(cells.size());
        for (const auto c : cells) contents.push_back(layout.provenance[c]);
        rng.shuffle(contents);
        for (std::size_t k = 0; k < cells.size(); ++k) layout.provenance[cells[k]] = contents[k];
      }
      return layout;
    }
    case Method::bcr: {
      check_geometry(spec.chunks);
      const auto perm = random_permutation(static_cast<std::size_t>(spec.chunks.slots()), spec.seed);
      return chunk_layout_with_slots(schema, spec.chunks, perm);
    }
    case Method::hva:
      return hilbert_layout(d, spec.hilbert_order);
    case Method::hvr: {
      const auto perm = random_permutation(static_cast<std::size_t>(d), spec.seed);
      return hilbert_layout_of(perm, spec.hilbert_order);
    }
  }
  fail(Errc::invalid_argument, "unknown arrangement method");
}

ImageGrid sequential_arrange(std::span<const double> values, int rows, int cols) {
  return sequential_layout(static_cast<int>(values.size()), rows, cols).render(values);
}

ImageGrid category_chunk_arrange(std::span<const double> values, const FeatureSchema& schema,
                                 const ArrangementSpec& spec) {
  return chunk_layout(schema, spec.chunks).render(values);
}

ImageGrid hilbert_arrange(std::span<const double> values) {
  return hilbert_layout(static_cast<int>(values.size())).render(values);
}

ImageGrid randomize_arrangement(std::span<const double> values, const FeatureSchema& schema,
                                const ArrangementSpec& spec, std::uint64_t seed) {
  ArrangementSpec seeded = spec;
  seeded.seed = seed;
  return make_layout(seeded, schema).render(values);
}

ReducedFeatures reduce_features(const Dataset& ds, int target) {
  const int d = static_cast<int>(ds.schema().size());
  if (target < 0) fail(Errc::invalid_argument, "target feature count must be non-negative");
  if (target > d)
    fail(Errc::target_too_large, "cannot keep " + std::to_string(target) + " of " +
                                     std::to_string(d) + " features");
  std::vector<std::size_t> missing(static_cast<std::size_t>(d), 0);
  for (const auto& o : ds.observations())
    for (std::size_t j = 0; j < o.values.size(); ++j)
      if (is_missing(o.values[j])) ++missing[j];

  // Rank by (missing count asc, index asc); keep the first `target`.
  std::vector<int> order = identity_order(d);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return missing[static_cast<std::size_t>(a)] < missing[static_cast<std::size_t>(b)];
  });
  std::vector<int> kept(order.begin(), order.begin() + target);
  std::sort(kept.begin(), kept.end());
  FeatureSchema schema = ds.schema().subset(kept);
  Dataset reduced = ds.select_features(kept, schema);
  return {std::move(reduced), std::move(schema), std::move(kept)};
}

int largest_power_of_four_at_most(int count) {
  if (count < 1) fail(Errc::invalid_argument, "count must be positive");
  int p = 1;
  while (p <= count / 4) p *= 4;
  return p;
}

}  // namespace finimg
