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

#ifndef BLAZ_CODEC_HPP
#define BLAZ_CODEC_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "blaz/ndarray.hpp"
#include "blaz/precision.hpp"
#include "blaz/transform.hpp"

namespace blaz {

// Selects which intrablock coefficient positions are stored. Dropped
// positions decompress as zero.
class PruningMask {
 public:
  PruningMask() = default;
  PruningMask(Shape shape, std::vector<bool> bits);

  static PruningMask full(const Shape& shape);
  static PruningMask none(const Shape& shape);
  // Keeps the `count` lowest row-major positions.
  static PruningMask first(const Shape& shape, std::size_t count);
  // Drops the hyper-rectangle of extent `corner` anchored at the highest
  // index of every axis (8x8 blocks with a 6x6 corner keep 28 positions).
  static PruningMask drop_high_corner(const Shape& shape, const Shape& corner);

  const Shape& shape() const noexcept { return shape_; }
  const std::vector<bool>& bits() const noexcept { return bits_; }
  std::size_t kept_count() const noexcept { return kept_.size(); }
  // Row-major intrablock offsets of kept positions, ascending.
  std::span<const std::size_t> kept_positions() const noexcept { return kept_; }
  bool keeps_first() const noexcept { return !bits_.empty() && bits_[0]; }

  friend bool operator==(const PruningMask& a, const PruningMask& b) {
    return a.shape_ == b.shape_ && a.bits_ == b.bits_;
  }

 private:
  Shape shape_;
  std::vector<bool> bits_;
  std::vector<std::size_t> kept_;
};

struct CodecSettings {
  Shape block_shape;
  FloatKind float_kind = FloatKind::kF32;
  IndexKind index_kind = IndexKind::kI16;
  TransformFamily transform = TransformFamily::kDct;
  PruningMask mask;

  // Full mask over `block_shape`.
  static CodecSettings make(Shape block_shape, FloatKind float_kind,
                            IndexKind index_kind,
                            TransformFamily transform = TransformFamily::kDct);

  // Throws on non power-of-two extents, mask/block shape disagreement or a
  // rank that differs from `rank` (when nonzero).
  void validate(std::size_t rank = 0) const;

  // sqrt(prod(block_shape)): ratio between a block's first coefficient and
  // its mean.
  double mean_scale() const;

  friend bool operator==(const CodecSettings&, const CodecSettings&) = default;
};

std::string describe(const CodecSettings& settings);

// Compressed form: original shape, settings, one maximum per block and the
// kept bin indices of every block, concatenated in row-major grid order.
// Bin indices stored at the width of their index kind.
using IndexStorage =
    std::variant<std::vector<std::int8_t>, std::vector<std::int16_t>,
                 std::vector<std::int32_t>, std::vector<std::int64_t>>;

class CompressedArray {
 public:
  CompressedArray() = default;
  CompressedArray(Shape original_shape, CodecSettings settings,
                  std::vector<double> maxima, std::vector<std::int64_t> indices);

  const Shape& original_shape() const noexcept { return original_shape_; }
  const CodecSettings& settings() const noexcept { return settings_; }
  Shape block_grid() const;
  std::size_t block_count() const noexcept { return maxima_.size(); }
  std::size_t kept_per_block() const noexcept { return settings_.mask.kept_count(); }
  std::int64_t radius() const noexcept { return blaz::radius(settings_.index_kind); }

  std::span<const double> maxima() const noexcept { return maxima_; }
  std::size_t index_count() const;
  std::int64_t index(std::size_t i) const;
  // Widened copy of every index, block-major.
  std::vector<std::int64_t> indices() const;

  // Calls fn with a std::span over the stored indices in their own width.
  template <typename Fn>
  decltype(auto) visit_indices(Fn&& fn) const {
    return std::visit(
        [&](const auto& v) -> decltype(auto) {
          return fn(std::span<const typename std::decay_t<decltype(v)>::value_type>(v));
        },
        indices_);
  }

  // Bitwise equality, including maxima bit patterns.
  friend bool operator==(const CompressedArray& a, const CompressedArray& b);

 private:
  Shape original_shape_;
  CodecSettings settings_;
  std::vector<double> maxima_;
  IndexStorage indices_;
};

struct Binned {
  std::vector<double> maxima;
  std::vector<std::int64_t> indices;  // block-major, block_size per block
};

// Index of coefficient `c` in a block whose stored maximum is `n`:
// round_half_even(r * c / n) clamped to [-r, r]; zero when n is zero or the
// quotient is not finite.
std::int64_t bin_value(double c, double n, std::int64_t r);

// Coefficient represented by index `f` in a block with maximum `n`.
inline double unbin_value(std::int64_t f, double n, std::int64_t r) {
  return n * (static_cast<double>(f) / static_cast<double>(r));
}

// N_k = max |C_k| (stored in `maxima_kind`) and I_k = bin(C_k, N_k).
Binned bin(const BlockedArray& coefficients, IndexKind index_kind,
           FloatKind maxima_kind = FloatKind::kF64);

// Kept indices of every block in row-major intrablock order.
std::vector<std::int64_t> prune_and_flatten(std::span<const std::int64_t> indices,
                                            const PruningMask& mask);

// Inverse of prune_and_flatten with zeros at dropped positions.
std::vector<std::int64_t> unflatten(std::span<const std::int64_t> flat,
                                    const PruningMask& mask);

// Converts, blocks and transforms: the exact coefficients compress() bins.
BlockedArray coefficients_of(const DenseArray& a, const CodecSettings& settings);

CompressedArray compress(const DenseArray& a, const CodecSettings& settings);

// Bins already-transformed coefficients of shape `original_shape`.
CompressedArray compress_coefficients(const BlockedArray& coefficients,
                                      const CodecSettings& settings);

// N * F / r per block, with zeros at pruned positions.
BlockedArray specified_coefficients(const CompressedArray& a);

DenseArray decompress(const CompressedArray& a);

}  // namespace blaz

#endif  // BLAZ_CODEC_HPP
