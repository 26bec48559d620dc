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

#ifndef BLAZ_TRANSFORM_HPP
#define BLAZ_TRANSFORM_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "blaz/ndarray.hpp"

namespace blaz {

enum class TransformFamily : std::uint8_t { kDct = 0, kHaar = 1 };

std::string_view to_string(TransformFamily family);
std::optional<TransformFamily> parse_transform(std::string_view name);

// Square orthonormal basis for one block extent. Column j holds basis vector
// j sampled at each position, so a block's coefficients along this axis are
// c_j = sum_x b_x * H(x, j). Column 0 is the constant vector 1/sqrt(size)
// for both families.
class TransformMatrix {
 public:
  TransformMatrix(std::size_t size, TransformFamily family,
                  std::vector<double> entries);

  std::size_t size() const noexcept { return size_; }
  TransformFamily family() const noexcept { return family_; }
  // (position, frequency), both zero-based.
  double operator()(std::size_t x, std::size_t j) const {
    return entries_[x * size_ + j];
  }
  std::span<const double> entries() const noexcept { return entries_; }

 private:
  std::size_t size_;
  TransformFamily family_;
  std::vector<double> entries_;
};

// DCT-II: H(x, j) = sqrt((1 + [j > 0]) / s) * cos(pi * j * (2x + 1) / (2s)).
// Haar: coarse-to-fine orthonormal Haar wavelets.
TransformMatrix make_transform(std::size_t size, TransformFamily family);

// One matrix per axis of `block_shape`.
std::vector<TransformMatrix> make_transforms(const Shape& block_shape,
                                             TransformFamily family);

// In-place separable transform of a single row-major block.
void forward_block(std::span<double> block, const Shape& block_shape,
                   std::span<const TransformMatrix> mats);
void inverse_block(std::span<double> block, const Shape& block_shape,
                   std::span<const TransformMatrix> mats);

BlockedArray forward_transform(const BlockedArray& b,
                               std::span<const TransformMatrix> mats);
BlockedArray inverse_transform(const BlockedArray& c,
                               std::span<const TransformMatrix> mats);

}  // namespace blaz

#endif  // BLAZ_TRANSFORM_HPP
