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

#include "finimg/grid_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "finimg/csv.hpp"
#include "finimg/error.hpp"

namespace finimg {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write " + path.string());
  return out;
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open " + path.string());
  csv::Reader reader(in);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  while (reader.next(row)) rows.push_back(row);
  return rows;
}

}  // namespace

void write_grid_csv(const ImageGrid& grid, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      if (c) out << ',';
      out << csv::format_double(grid.at(r, c));
    }
    out << '\n';
  }
}

void write_provenance_csv(const ImageGrid& grid, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      if (c) out << ',';
      out << grid.source(r, c);
    }
    out << '\n';
  }
}

ImageGrid read_grid_csv(const std::filesystem::path& cells, const std::filesystem::path& provenance) {
  const auto value_rows = read_rows(cells);
  const auto source_rows = read_rows(provenance);
  if (value_rows.empty() || value_rows.size() != source_rows.size())
    fail(Errc::parse, "grid and provenance files disagree on row count");
  ImageGrid grid;
  grid.rows = static_cast<int>(value_rows.size());
  grid.cols = static_cast<int>(value_rows.front().size());
  for (std::size_t r = 0; r < value_rows.size(); ++r) {
    if (value_rows[r].size() != static_cast<std::size_t>(grid.cols) ||
        source_rows[r].size() != static_cast<std::size_t>(grid.cols))
      fail(Errc::parse, "ragged grid at row " + std::to_string(r + 1));
    for (int c = 0; c < grid.cols; ++c) {
      const auto v = csv::parse_double(value_rows[r][static_cast<std::size_t>(c)]);
      const auto s = csv::parse_int(source_rows[r][static_cast<std::size_t>(c)]);
      if (!v || !s || *s < kZeroPad)
        fail(Errc::parse, "bad grid cell at row " + std::to_string(r + 1) + ", column " +
                              std::to_string(c + 1));
      grid.cells.push_back(*v);
      grid.provenance.push_back(static_cast<int>(*s));
    }
  }
  return grid;
}

void write_pgm(const ImageGrid& grid, const std::filesystem::path& path, int scale) {
  scale = std::max(scale, 1);
  auto out = open_out(path);
  const auto [lo_it, hi_it] = std::minmax_element(grid.cells.begin(), grid.cells.end());
  const double lo = grid.cells.empty() ? 0.0 : *lo_it;
  const double hi = grid.cells.empty() ? 0.0 : *hi_it;
  const double span = hi > lo ? hi - lo : 1.0;
  out << "P5\n" << grid.cols * scale << ' ' << grid.rows * scale << "\n255\n";
  std::vector<char> line(static_cast<std::size_t>(grid.cols * scale));
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      const double t = (grid.at(r, c) - lo) / span;
      const auto level = static_cast<unsigned char>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
      std::fill_n(line.begin() + c * scale, scale, static_cast<char>(level));
    }
    for (int k = 0; k < scale; ++k) out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
}

}  // namespace finimg
