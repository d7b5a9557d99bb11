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

#include "finimg/nnet/tensor.hpp"

#include <algorithm>

#include "finimg/error.hpp"

namespace finimg::nnet {

std::size_t element_count(const Shape& shape) noexcept {
  std::size_t n = 1;
  for (const auto d : shape) n *= d;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
  data_.assign(element_count(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), data_(values.begin(), values.end()) {
  if (data_.size() != element_count(shape_))
    fail(Errc::shape_mismatch, "tensor of shape " + shape_string(shape_) + " given " +
                                   std::to_string(data_.size()) + " values");
}

void Tensor::resize(Shape shape) {
  const auto n = element_count(shape);
  shape_ = std::move(shape);
  data_.resize(n);
}

void Tensor::reshape(Shape shape) {
  if (element_count(shape) != data_.size())
    fail(Errc::shape_mismatch, "cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
  shape_ = std::move(shape);
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

Tensor Tensor::slice_rows(std::size_t first, std::size_t count) const {
  if (shape_.empty() || first + count > shape_[0])
    fail(Errc::out_of_range, "row slice outside tensor of shape " + shape_string(shape_));
  Shape shape = shape_;
  shape[0] = count;
  const std::size_t stride = shape_[0] ? data_.size() / shape_[0] : 0;
  std::vector<double> values(data_.begin() + static_cast<std::ptrdiff_t>(first * stride),
                             data_.begin() + static_cast<std::ptrdiff_t>((first + count) * stride));
  return Tensor(std::move(shape), std::move(values));
}

}  // namespace finimg::nnet
