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

#include <filesystem>

#include "finimg/encoding.hpp"

namespace finimg {

// rows lines of cols comma-separated values (shortest round-trip decimal).
void write_grid_csv(const ImageGrid& grid, const std::filesystem::path& path);
// Same shape; each entry is the source feature index, or -1 for padding.
void write_provenance_csv(const ImageGrid& grid, const std::filesystem::path& path);
ImageGrid read_grid_csv(const std::filesystem::path& cells, const std::filesystem::path& provenance);

// Binary greyscale (P5), values min-max scaled to 0..255, `scale` pixels per cell.
void write_pgm(const ImageGrid& grid, const std::filesystem::path& path, int scale = 8);

}  // namespace finimg
