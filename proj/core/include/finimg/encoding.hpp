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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "finimg/dataset.hpp"
#include "finimg/hilbert.hpp"
#include "finimg/schema.hpp"

namespace finimg {

// Seven ways of laying a feature vector out on a 2D grid. sa, cca and hva are
// deterministic; ra, wcr, bcr and hvr are their seeded randomized controls.
enum class Method { sa, ra, cca, wcr, bcr, hva, hvr };

std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view text) noexcept;
bool is_randomized(Method m) noexcept;

inline constexpr int kZeroPad = -1;

// Cell values plus, for each cell, the source feature index or kZeroPad.
struct ImageGrid {
  int rows = 0;
  int cols = 0;
  std::vector<double> cells;
  std::vector<int> provenance;

  double at(int r, int c) const { return cells[static_cast<std::size_t>(r * cols + c)]; }
  int source(int r, int c) const { return provenance[static_cast<std::size_t>(r * cols + c)]; }
  std::size_t zero_pad_count() const;

  bool operator==(const ImageGrid&) const = default;
};

// The value-independent part of an arrangement. One layout is computed per
// (method, schema, seed) and rendered for every observation.
struct GridLayout {
  int rows = 0;
  int cols = 0;
  int feature_count = 0;
  std::vector<int> provenance;

  ImageGrid render(std::span<const double> values) const;
  // Writes rows*cols cells into `out` without building an ImageGrid.
  void render_into(std::span<const double> values, std::span<double> out) const;

  bool operator==(const GridLayout&) const = default;
};

// h x w chunks tiled on a grid_rows x grid_cols layout.
struct ChunkGeometry {
  int chunk_rows = 0;
  int chunk_cols = 0;
  int grid_rows = 0;
  int grid_cols = 0;

  int rows() const noexcept { return chunk_rows * grid_rows; }
  int cols() const noexcept { return chunk_cols * grid_cols; }
  int slots() const noexcept { return grid_rows * grid_cols; }

  bool operator==(const ChunkGeometry&) const = default;
};

// Square chunks just large enough for the biggest section, two chunk rows.
// Gives 2x3 of 9x9 for the fundamental schema and 2x4 of 4x4 for ratios.
ChunkGeometry default_chunk_geometry(const FeatureSchema& schema);

struct ArrangementSpec {
  Method method = Method::sa;
  // Canvas for sa/ra.
  int rows = 0;
  int cols = 0;
  // Curve order for hva/hvr; 0 picks the smallest order that fits.
  int hilbert_order = 0;
  ChunkGeometry chunks;
  // Used by ra/wcr/bcr/hvr only.
  std::uint64_t seed = 0;

  // Canonical geometry: the sa/ra canvas equals the chunk canvas
  // (18x27 for 332 fundamentals, 8x16 for 69 ratios).
  static ArrangementSpec defaults(Method method, const FeatureSchema& schema,
                                  std::uint64_t seed = 0);
};

GridLayout sequential_layout(int feature_count, int rows, int cols);
GridLayout chunk_layout(const FeatureSchema& schema, const ChunkGeometry& geometry);
GridLayout hilbert_layout(int feature_count, int order = 0);
// Any of the seven methods; the randomized ones draw from spec.seed only.
GridLayout make_layout(const ArrangementSpec& spec, const FeatureSchema& schema);

ImageGrid sequential_arrange(std::span<const double> values, int rows, int cols);
ImageGrid category_chunk_arrange(std::span<const double> values, const FeatureSchema& schema,
                                 const ArrangementSpec& spec);
ImageGrid hilbert_arrange(std::span<const double> values);
ImageGrid randomize_arrangement(std::span<const double> values, const FeatureSchema& schema,
                                const ArrangementSpec& spec, std::uint64_t seed);

struct ReducedFeatures {
  Dataset dataset;
  FeatureSchema schema;
  std::vector<int> kept;  // surviving original indices, ascending
};

// Drops the (count - target) features with the most missing values; ties drop
// the later feature. Survivors keep their relative order.
ReducedFeatures reduce_features(const Dataset& ds, int target);

// Largest 4^n not exceeding count (count >= 1).
int largest_power_of_four_at_most(int count);

}  // namespace finimg
