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

#include <stdexcept>
#include <string>
#include <string_view>

namespace finimg {

enum class Errc {
  invalid_argument,
  unknown_rating,
  empty_test,
  schema_mismatch,
  parse,
  io,
  capacity,
  chunk_overflow,
  out_of_range,
  target_too_large,
  shape_mismatch,
  input_too_small,
  divergence,
  empty_set,
  undefined,
  not_applicable,
  insufficient_samples,
  zero_variance,
  validation,
};

std::string_view to_string(Errc code) noexcept;

// All library failures are reported through this type. The code lets callers
// (and tests) distinguish failure classes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace finimg
