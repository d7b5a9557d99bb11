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

#include "finimg/error.hpp"

namespace finimg {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::unknown_rating: return "unknown-rating";
    case Errc::empty_test: return "empty-test";
    case Errc::schema_mismatch: return "schema-mismatch";
    case Errc::parse: return "parse";
    case Errc::io: return "io";
    case Errc::capacity: return "capacity";
    case Errc::chunk_overflow: return "chunk-overflow";
    case Errc::out_of_range: return "out-of-range";
    case Errc::target_too_large: return "target-too-large";
    case Errc::shape_mismatch: return "shape-mismatch";
    case Errc::input_too_small: return "input-too-small";
    case Errc::divergence: return "divergence";
    case Errc::empty_set: return "empty-set";
    case Errc::undefined: return "undefined";
    case Errc::not_applicable: return "not-applicable";
    case Errc::insufficient_samples: return "insufficient-samples";
    case Errc::zero_variance: return "zero-variance";
    case Errc::validation: return "validation";
  }
  return "unknown";
}

}  // namespace finimg
