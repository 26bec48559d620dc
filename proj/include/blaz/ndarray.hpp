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

#ifndef BLAZ_NDARRAY_HPP
#define BLAZ_NDARRAY_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "blaz/precision.hpp"

namespace blaz {

// Extents of an N-dimensional array, outermost axis first. Every extent is
// at least one and there is at least one axis.
class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<std::size_t> dims);
  Shape(std::initializer_list<std::size_t> dims);

  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t operator[](std::size_t axis) const { return dims_[axis]; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t element_count() const noexcept;

  // Row-major strides in elements.
  std::vector<std::size_t> strides() const;

  std::string to_string() const;

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  std::vector<std::size_t> dims_;
};

constexpr bool is_power_of_two(std::size_t n) noexcept {
  return n != 0 && (n & (n - 1)) == 0;
}

// ceil(s / i) per axis.
Shape block_grid_for(const Shape& shape, const Shape& block_shape);

// Dense row-major array. Values are always representable in `kind()`; the
// constructor rounds its input to enforce that.
class DenseArray {
 public:
  DenseArray() = default;
  DenseArray(Shape shape, FloatKind kind, std::vector<double> values);

  static DenseArray zeros(Shape shape, FloatKind kind = FloatKind::kF64);
  static DenseArray filled(Shape shape, double value,
                           FloatKind kind = FloatKind::kF64);

  const Shape& shape() const noexcept { return shape_; }
  FloatKind kind() const noexcept { return kind_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  Shape shape_;
  FloatKind kind_ = FloatKind::kF64;
  std::vector<double> values_;
};

// An array split into equally shaped blocks. Storage is block-major: blocks
// follow each other in row-major grid order and each block is stored
// row-major. Positions beyond the original shape are padding.
class BlockedArray {
 public:
  BlockedArray() = default;
  BlockedArray(Shape original_shape, Shape block_shape,
               std::vector<double> data);

  const Shape& original_shape() const noexcept { return original_shape_; }
  const Shape& block_shape() const noexcept { return block_shape_; }
  const Shape& block_grid() const noexcept { return block_grid_; }
  std::size_t block_count() const noexcept { return block_grid_.element_count(); }
  std::size_t block_size() const noexcept { return block_shape_.element_count(); }

  std::span<const double> block(std::size_t k) const;
  std::span<double> block(std::size_t k);
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

 private:
  Shape original_shape_;
  Shape block_shape_;
  Shape block_grid_;
  std::vector<double> data_;
};

DenseArray convert_precision(const DenseArray& a, FloatKind kind);

// Splits `a` into blocks, zero padding each axis up to a multiple of the
// block extent. Block extents must be powers of two.
BlockedArray block(const DenseArray& a, const Shape& block_shape);

// Merges blocks and crops to the original shape. The result is F64.
DenseArray unblock(const BlockedArray& b, FloatKind kind = FloatKind::kF64);

// Constant gradient from 0 at the first element to 1 at the last:
// element x holds sum(x) / sum(s - 1) with zero-based x.
DenseArray gradient_array(const Shape& shape, FloatKind kind = FloatKind::kF64);

}  // namespace blaz

#endif  // BLAZ_NDARRAY_HPP
