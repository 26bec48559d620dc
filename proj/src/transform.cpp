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

#include "blaz/transform.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "blaz/error.hpp"
#include "blaz/parallel.hpp"

namespace blaz {

std::string_view to_string(TransformFamily family) {
  return family == TransformFamily::kDct ? "dct" : "haar";
}

std::optional<TransformFamily> parse_transform(std::string_view name) {
  if (name == "dct") return TransformFamily::kDct;
  if (name == "haar") return TransformFamily::kHaar;
  return std::nullopt;
}

TransformMatrix::TransformMatrix(std::size_t size, TransformFamily family,
                                 std::vector<double> entries)
    : size_(size), family_(family), entries_(std::move(entries)) {
  if (entries_.size() != size_ * size_) {
    throw Error(ErrorCode::kLengthMismatch, "transform matrix must be square");
  }
}

namespace {

std::vector<double> dct_entries(std::size_t s) {
  std::vector<double> h(s * s);
  const double n = static_cast<double>(s);
  for (std::size_t x = 0; x < s; ++x) {
    for (std::size_t j = 0; j < s; ++j) {
      const double scale = std::sqrt((j > 0 ? 2.0 : 1.0) / n);
      h[x * s + j] = scale * std::cos(std::numbers::pi * static_cast<double>(j) *
                                      static_cast<double>(2 * x + 1) / (2.0 * n));
    }
  }
  return h;
}

std::vector<double> haar_entries(std::size_t s) {
  std::vector<double> h(s * s, 0.0);
  const double root = 1.0 / std::sqrt(static_cast<double>(s));
  for (std::size_t x = 0; x < s; ++x) h[x * s] = root;
  // Level l has 2^l wavelets of support s / 2^l, stored in columns 2^l + k.
  for (std::size_t count = 1; count < s; count *= 2) {
    const std::size_t support = s / count;
    const double amp = 1.0 / std::sqrt(static_cast<double>(support));
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t column = count + k;
      for (std::size_t t = 0; t < support; ++t) {
        h[(k * support + t) * s + column] = t < support / 2 ? amp : -amp;
      }
    }
  }
  return h;
}

// Applies the matrix along one axis of a row-major block.
template <bool Forward>
void apply_axis(std::span<double> block, const Shape& shape, std::size_t axis,
                const TransformMatrix& m, std::vector<double>& line,
                std::vector<double>& out) {
  const std::size_t n = shape[axis];
  if (n == 1) return;
  std::size_t inner = 1;
  for (std::size_t k = axis + 1; k < shape.rank(); ++k) inner *= shape[k];
  const std::size_t outer = block.size() / (n * inner);
  line.resize(n);
  out.resize(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      double* base = block.data() + o * n * inner + in;
      for (std::size_t x = 0; x < n; ++x) line[x] = base[x * inner];
      for (std::size_t a = 0; a < n; ++a) {
        double acc = 0.0;
        if constexpr (Forward) {
          for (std::size_t x = 0; x < n; ++x) acc += line[x] * m(x, a);
        } else {
          for (std::size_t j = 0; j < n; ++j) acc += line[j] * m(a, j);
        }
        out[a] = acc;
      }
      for (std::size_t x = 0; x < n; ++x) base[x * inner] = out[x];
    }
  }
}

void check_mats(const Shape& block_shape, std::span<const TransformMatrix> mats) {
  if (mats.size() != block_shape.rank()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "need one transform matrix per block axis");
  }
  for (std::size_t k = 0; k < mats.size(); ++k) {
    if (mats[k].size() != block_shape[k]) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "transform size " + std::to_string(mats[k].size()) +
                      " does not match block extent " +
                      std::to_string(block_shape[k]) + " on axis " +
                      std::to_string(k));
    }
  }
}

template <bool Forward>
BlockedArray transform_all(const BlockedArray& in,
                           std::span<const TransformMatrix> mats) {
  check_mats(in.block_shape(), mats);
  std::vector<double> data(in.data().begin(), in.data().end());
  BlockedArray result(in.original_shape(), in.block_shape(), std::move(data));
  parallel_for(result.block_count(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> line, out;
    for (std::size_t k = begin; k < end; ++k) {
      auto blk = result.block(k);
      for (std::size_t axis = 0; axis < mats.size(); ++axis) {
        apply_axis<Forward>(blk, in.block_shape(), axis, mats[axis], line, out);
      }
    }
  });
  return result;
}

}  // namespace

TransformMatrix make_transform(std::size_t size, TransformFamily family) {
  if (!is_power_of_two(size)) {
    throw Error(ErrorCode::kNonPowerOfTwoBlock,
                "block extents must be powers of two, got " +
                    std::to_string(size));
  }
  return TransformMatrix(size, family,
                         family == TransformFamily::kDct ? dct_entries(size)
                                                         : haar_entries(size));
}

std::vector<TransformMatrix> make_transforms(const Shape& block_shape,
                                             TransformFamily family) {
  std::vector<TransformMatrix> mats;
  mats.reserve(block_shape.rank());
  for (std::size_t e : block_shape.dims()) mats.push_back(make_transform(e, family));
  return mats;
}

void forward_block(std::span<double> block, const Shape& block_shape,
                   std::span<const TransformMatrix> mats) {
  check_mats(block_shape, mats);
  std::vector<double> line, out;
  for (std::size_t axis = 0; axis < mats.size(); ++axis) {
    apply_axis<true>(block, block_shape, axis, mats[axis], line, out);
  }
}

void inverse_block(std::span<double> block, const Shape& block_shape,
                   std::span<const TransformMatrix> mats) {
  check_mats(block_shape, mats);
  std::vector<double> line, out;
  for (std::size_t axis = 0; axis < mats.size(); ++axis) {
    apply_axis<false>(block, block_shape, axis, mats[axis], line, out);
  }
}

BlockedArray forward_transform(const BlockedArray& b,
                               std::span<const TransformMatrix> mats) {
  return transform_all<true>(b, mats);
}

BlockedArray inverse_transform(const BlockedArray& c,
                               std::span<const TransformMatrix> mats) {
  return transform_all<false>(c, mats);
}

}  // namespace blaz
