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
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "finimg/nnet/spec.hpp"
#include "finimg/nnet/tensor.hpp"
#include "finimg/nnet/train.hpp"

namespace finimg::nnet {

// Self-describing text container. Layout (one item per line):
//
//   finimg-checkpoint 1
//   seed <u64>
//   meta <key> <value>            repeated; value runs to end of line
//   input <rank> <dims...>
//   layer <kind> <args...>        one per layer, in order
//   history <n> <values...>
//   array <name> <n> <values...>  repeated; free-form named vectors
//   param <rank> <dims...> <values...>   one per parameter tensor
//   end
//
// Reals are written as C99 hex floats, so a save/load cycle is bit-exact.
struct Checkpoint {
  NetworkSpec spec;
  std::vector<Tensor> parameters;
  std::vector<double> history;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> metadata;
  std::map<std::string, std::vector<double>> arrays;
};

Checkpoint make_checkpoint(const TrainedNetwork& trained);
TrainedNetwork restore(const Checkpoint& checkpoint);

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace finimg::nnet
