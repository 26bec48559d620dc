// Copyright 2026 The Blaz Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "blaz/ndarray.hpp"

#include <numeric>
#include <sstream>
#include <utility>

#include "blaz/error.hpp"

namespace blaz {

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) {
    throw Error(ErrorCode::kInvalidShape, "shape must have at least one axis");
  }
  for (std::size_t d : dims_) {
    if (d == 0) {
      throw Error(ErrorCode::kInvalidShape, "shape extents must be positive");
    }
  }
}

Shape::Shape(std::initializer_list<std::size_t> dims)
    : Shape(std::vector<std::size_t>(dims)) {}

std::size_t Shape::element_count() const noexcept {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1},
                         std::multiplies<>());
}

std::vector<std::size_t> Shape::strides() const {
  std::vector<std::size_t> s(dims_.size(), 1);
  for (std::size_t k = dims_.size(); k-- > 1;) s[k - 1] = s[k] * dims_[k];
  return s;
}

std::string Shape::to_string() const {
  std::ostringstream out;
  out << '(';
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (k) out << ',';
    out << dims_[k];
  }
  out << ')';
  return out.str();
}

Shape block_grid_for(const Shape& shape, const Shape& block_shape) {
  if (shape.rank() != block_shape.rank()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "block shape " + block_shape.to_string() +
                    " does not match array rank of " + shape.to_string());
  }
  std::vector<std::size_t> grid(shape.rank());
  for (std::size_t k = 0; k < shape.rank(); ++k) {
    grid[k] = (shape[k] + block_shape[k] - 1) / block_shape[k];
  }
  return Shape(std::move(grid));
}

DenseArray::DenseArray(Shape shape, FloatKind kind, std::vector<double> values)
    : shape_(std::move(shape)), kind_(kind), values_(std::move(values)) {
  if (values_.size() != shape_.element_count()) {
    throw Error(ErrorCode::kLengthMismatch,
                "value count " + std::to_string(values_.size()) +
                    " does not match shape " + shape_.to_string());
  }
  if (kind_ != FloatKind::kF64) {
    for (double& v : values_) v = round_to(kind_, v);
  }
}

DenseArray DenseArray::zeros(Shape shape, FloatKind kind) {
  return filled(std::move(shape), 0.0, kind);
}

DenseArray DenseArray::filled(Shape shape, double value, FloatKind kind) {
  const std::size_t n = shape.element_count();
  return DenseArray(std::move(shape), kind, std::vector<double>(n, value));
}

BlockedArray::BlockedArray(Shape original_shape, Shape block_shape,
                           std::vector<double> data)
    : original_shape_(std::move(original_shape)),
      block_shape_(std::move(block_shape)),
      block_grid_(block_grid_for(original_shape_, block_shape_)),
      data_(std::move(data)) {
  if (data_.size() != block_count() * block_size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "blocked storage has " + std::to_string(data_.size()) +
                    " values, expected " +
                    std::to_string(block_count() * block_size()));
  }
}

std::span<const double> BlockedArray::block(std::size_t k) const {
  return std::span<const double>(data_).subspan(k * block_size(), block_size());
}

std::span<double> BlockedArray::block(std::size_t k) {
  return std::span<double>(data_).subspan(k * block_size(), block_size());
}

DenseArray convert_precision(const DenseArray& a, FloatKind kind) {
  return DenseArray(a.shape(), kind,
                    std::vector<double>(a.values().begin(), a.values().end()));
}

namespace {

// Visits every element of `shape` in row-major order, passing its linear
// index and the position of that element in block-major storage.
template <typename Fn>
void for_each_blocked_position(const Shape& shape, const Shape& block_shape,
                               Fn&& fn) {
  const std::size_t d = shape.rank();
  const Shape grid = block_grid_for(shape, block_shape);
  const auto grid_strides = grid.strides();
  const auto intra_strides = block_shape.strides();
  const std::size_t block_size = block_shape.element_count();

  // Innermost axis is walked in runs; the outer index is tracked per axis.
  std::vector<std::size_t> index(d, 0);
  const std::size_t inner = shape[d - 1];
  const std::size_t inner_block = block_shape[d - 1];
  std::size_t linear = 0;
  const std::size_t outer_count = shape.element_count() / inner;
  for (std::size_t o = 0; o < outer_count; ++o) {
    std::size_t base = 0;
    for (std::size_t k = 0; k + 1 < d; ++k) {
      base += (index[k] / block_shape[k]) * grid_strides[k] * block_size +
              (index[k] % block_shape[k]) * intra_strides[k];
    }
    for (std::size_t x = 0; x < inner; ++x) {
      fn(linear++, base + (x / inner_block) * block_size + x % inner_block);
    }
    for (std::size_t k = d - 1; k-- > 0;) {
      if (++index[k] < shape[k]) break;
      index[k] = 0;
    }
  }
}

}  // namespace

BlockedArray block(const DenseArray& a, const Shape& block_shape) {
  const Shape grid = block_grid_for(a.shape(), block_shape);
  for (std::size_t e : block_shape.dims()) {
    if (!is_power_of_two(e)) {
      throw Error(ErrorCode::kNonPowerOfTwoBlock,
                  "block extents must be powers of two, got " +
                      block_shape.to_string());
    }
  }
  std::vector<double> data(grid.element_count() * block_shape.element_count(),
                           0.0);
  const auto values = a.values();
  for_each_blocked_position(a.shape(), block_shape,
                            [&](std::size_t src, std::size_t dst) {
                              data[dst] = values[src];
                            });
  return BlockedArray(a.shape(), block_shape, std::move(data));
}

DenseArray unblock(const BlockedArray& b, FloatKind kind) {
  std::vector<double> values(b.original_shape().element_count());
  const auto data = b.data();
  for_each_blocked_position(b.original_shape(), b.block_shape(),
                            [&](std::size_t dst, std::size_t src) {
                              values[dst] = data[src];
                            });
  return DenseArray(b.original_shape(), kind, std::move(values));
}

DenseArray gradient_array(const Shape& shape, FloatKind kind) {
  std::size_t denominator = 0;
  for (std::size_t e : shape.dims()) denominator += e - 1;
  if (denominator == 0) {
    throw Error(ErrorCode::kDegenerateShape,
                "gradient needs at least one axis longer than 1");
  }
  const std::size_t n = shape.element_count();
  std::vector<double> values(n);
  std::vector<std::size_t> index(shape.rank(), 0);
  std::size_t index_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = static_cast<double>(index_sum) / static_cast<double>(denominator);
    for (std::size_t k = shape.rank(); k-- > 0;) {
      if (++index[k] < shape[k]) {
        ++index_sum;
        break;
      }
      index_sum -= shape[k] - 1;
      index[k] = 0;
    }
  }
  return DenseArray(shape, kind, std::move(values));
}

}  // namespace blaz
