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

#include "blaz/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "blaz/error.hpp"
#include "blaz/parallel.hpp"

namespace blaz {

PruningMask::PruningMask(Shape shape, std::vector<bool> bits)
    : shape_(std::move(shape)), bits_(std::move(bits)) {
  if (bits_.size() != shape_.element_count()) {
    throw Error(ErrorCode::kLengthMismatch,
                "pruning mask has " + std::to_string(bits_.size()) +
                    " bits, block shape " + shape_.to_string() + " needs " +
                    std::to_string(shape_.element_count()));
  }
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) kept_.push_back(i);
  }
}

PruningMask PruningMask::full(const Shape& shape) {
  return PruningMask(shape, std::vector<bool>(shape.element_count(), true));
}

PruningMask PruningMask::none(const Shape& shape) {
  return PruningMask(shape, std::vector<bool>(shape.element_count(), false));
}

PruningMask PruningMask::first(const Shape& shape, std::size_t count) {
  const std::size_t n = shape.element_count();
  if (count > n) {
    throw Error(ErrorCode::kInvalidParameter,
                "mask keeps " + std::to_string(count) + " of only " +
                    std::to_string(n) + " positions");
  }
  std::vector<bool> bits(n, false);
  std::fill_n(bits.begin(), count, true);
  return PruningMask(shape, std::move(bits));
}

PruningMask PruningMask::drop_high_corner(const Shape& shape, const Shape& corner) {
  if (corner.rank() != shape.rank()) {
    throw Error(ErrorCode::kDimensionMismatch, "corner rank differs from block rank");
  }
  const std::size_t n = shape.element_count();
  std::vector<bool> bits(n, true);
  std::vector<std::size_t> index(shape.rank(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    bool inside = true;
    for (std::size_t k = 0; k < shape.rank(); ++k) {
      inside = inside && index[k] + corner[k] >= shape[k];
    }
    bits[i] = !inside;
    for (std::size_t k = shape.rank(); k-- > 0;) {
      if (++index[k] < shape[k]) break;
      index[k] = 0;
    }
  }
  return PruningMask(shape, std::move(bits));
}

CodecSettings CodecSettings::make(Shape block_shape, FloatKind float_kind,
                                  IndexKind index_kind, TransformFamily transform) {
  PruningMask mask = PruningMask::full(block_shape);
  return CodecSettings{std::move(block_shape), float_kind, index_kind, transform,
                       std::move(mask)};
}

void CodecSettings::validate(std::size_t rank) const {
  if (block_shape.rank() == 0) {
    throw Error(ErrorCode::kInvalidShape, "block shape is empty");
  }
  if (rank != 0 && block_shape.rank() != rank) {
    throw Error(ErrorCode::kDimensionMismatch,
                "block shape " + block_shape.to_string() + " has rank " +
                    std::to_string(block_shape.rank()) + ", array has rank " +
                    std::to_string(rank));
  }
  for (std::size_t e : block_shape.dims()) {
    if (!is_power_of_two(e)) {
      throw Error(ErrorCode::kNonPowerOfTwoBlock,
                  "block extents must be powers of two, got " +
                      block_shape.to_string());
    }
  }
  if (mask.shape() != block_shape) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mask shape " + mask.shape().to_string() +
                    " differs from block shape " + block_shape.to_string());
  }
}

double CodecSettings::mean_scale() const {
  return std::sqrt(static_cast<double>(block_shape.element_count()));
}

std::string describe(const CodecSettings& s) {
  std::ostringstream out;
  out << "block=" << s.block_shape.to_string() << " float=" << to_string(s.float_kind)
      << " index=" << to_string(s.index_kind) << " transform=" << to_string(s.transform)
      << " kept=" << s.mask.kept_count() << '/' << s.block_shape.element_count();
  return out.str();
}

namespace {

template <typename T>
std::vector<T> narrow(const std::vector<std::int64_t>& wide) {
  return std::vector<T>(wide.begin(), wide.end());
}

IndexStorage make_storage(IndexKind kind, std::vector<std::int64_t> wide) {
  switch (kind) {
    case IndexKind::kI8:
      return narrow<std::int8_t>(wide);
    case IndexKind::kI16:
      return narrow<std::int16_t>(wide);
    case IndexKind::kI32:
      return narrow<std::int32_t>(wide);
    case IndexKind::kI64:
      break;
  }
  return wide;
}

}  // namespace

CompressedArray::CompressedArray(Shape original_shape, CodecSettings settings,
                                 std::vector<double> maxima,
                                 std::vector<std::int64_t> indices)
    : original_shape_(std::move(original_shape)),
      settings_(std::move(settings)),
      maxima_(std::move(maxima)) {
  settings_.validate(original_shape_.rank());
  const std::size_t blocks =
      block_grid_for(original_shape_, settings_.block_shape).element_count();
  if (maxima_.size() != blocks) {
    throw Error(ErrorCode::kLengthMismatch,
                "expected " + std::to_string(blocks) + " block maxima, got " +
                    std::to_string(maxima_.size()));
  }
  if (indices.size() != blocks * kept_per_block()) {
    throw Error(ErrorCode::kLengthMismatch,
                "expected " + std::to_string(blocks * kept_per_block()) +
                    " bin indices, got " + std::to_string(indices.size()));
  }
  const std::int64_t r = radius();
  for (std::int64_t f : indices) {
    if (f < -r || f > r) {
      throw Error(ErrorCode::kInvalidParameter,
                  "bin index " + std::to_string(f) + " outside [-r, r]");
    }
  }
  indices_ = make_storage(settings_.index_kind, std::move(indices));
}

std::size_t CompressedArray::index_count() const {
  return visit_indices([](auto f) { return f.size(); });
}

std::int64_t CompressedArray::index(std::size_t i) const {
  return visit_indices([i](auto f) { return static_cast<std::int64_t>(f[i]); });
}

std::vector<std::int64_t> CompressedArray::indices() const {
  return visit_indices([](auto f) { return std::vector<std::int64_t>(f.begin(), f.end()); });
}

Shape CompressedArray::block_grid() const {
  return block_grid_for(original_shape_, settings_.block_shape);
}

bool operator==(const CompressedArray& a, const CompressedArray& b) {
  if (!(a.original_shape_ == b.original_shape_) || !(a.settings_ == b.settings_) ||
      a.indices_ != b.indices_ || a.maxima_.size() != b.maxima_.size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.maxima_.size(); ++k) {
    if (std::bit_cast<std::uint64_t>(a.maxima_[k]) !=
        std::bit_cast<std::uint64_t>(b.maxima_[k])) {
      return false;
    }
  }
  return true;
}

std::int64_t bin_value(double c, double n, std::int64_t r) {
  if (n == 0.0) return 0;
  const double rd = static_cast<double>(r);
  const double q = std::nearbyint(rd * c / n);
  if (!std::isfinite(q)) return 0;
  if (q >= rd) return r;
  if (q <= -rd) return -r;
  return static_cast<std::int64_t>(q);
}

namespace {

// Bins one block against its own L-infinity norm, rounded to `maxima_kind`.
double bin_block(std::span<const double> coeffs, std::int64_t r,
                 FloatKind maxima_kind, std::span<std::int64_t> out) {
  double n = 0.0;
  bool has_nan = false;
  for (double c : coeffs) {
    has_nan = has_nan || std::isnan(c);
    n = std::max(n, std::fabs(c));
  }
  n = has_nan ? std::numeric_limits<double>::quiet_NaN() : round_to(maxima_kind, n);
  for (std::size_t j = 0; j < coeffs.size(); ++j) out[j] = bin_value(coeffs[j], n, r);
  return n;
}

}  // namespace

Binned bin(const BlockedArray& coefficients, IndexKind index_kind,
           FloatKind maxima_kind) {
  const std::size_t blocks = coefficients.block_count();
  const std::size_t size = coefficients.block_size();
  const std::int64_t r = radius(index_kind);
  Binned result{std::vector<double>(blocks),
                std::vector<std::int64_t>(blocks * size)};
  parallel_for(blocks, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      result.maxima[k] = bin_block(
          coefficients.block(k), r, maxima_kind,
          std::span<std::int64_t>(result.indices).subspan(k * size, size));
    }
  });
  return result;
}

std::vector<std::int64_t> prune_and_flatten(std::span<const std::int64_t> indices,
                                            const PruningMask& mask) {
  const std::size_t size = mask.shape().element_count();
  if (indices.size() % size != 0) {
    throw Error(ErrorCode::kLengthMismatch,
                "index count is not a multiple of the block size");
  }
  const std::size_t blocks = indices.size() / size;
  const auto kept = mask.kept_positions();
  std::vector<std::int64_t> flat;
  flat.reserve(blocks * kept.size());
  for (std::size_t k = 0; k < blocks; ++k) {
    for (std::size_t p : kept) flat.push_back(indices[k * size + p]);
  }
  return flat;
}

std::vector<std::int64_t> unflatten(std::span<const std::int64_t> flat,
                                    const PruningMask& mask) {
  const std::size_t size = mask.shape().element_count();
  const auto kept = mask.kept_positions();
  if (kept.empty()) {
    if (!flat.empty()) {
      throw Error(ErrorCode::kLengthMismatch,
                  "mask keeps nothing but indices were given");
    }
    return {};
  }
  if (flat.size() % kept.size() != 0) {
    throw Error(ErrorCode::kLengthMismatch,
                "flattened length " + std::to_string(flat.size()) +
                    " is not a multiple of the kept count " +
                    std::to_string(kept.size()));
  }
  const std::size_t blocks = flat.size() / kept.size();
  std::vector<std::int64_t> indices(blocks * size, 0);
  for (std::size_t k = 0; k < blocks; ++k) {
    for (std::size_t j = 0; j < kept.size(); ++j) {
      indices[k * size + kept[j]] = flat[k * kept.size() + j];
    }
  }
  return indices;
}

BlockedArray coefficients_of(const DenseArray& a, const CodecSettings& settings) {
  settings.validate(a.shape().rank());
  const DenseArray converted = convert_precision(a, settings.float_kind);
  const auto mats = make_transforms(settings.block_shape, settings.transform);
  return forward_transform(block(converted, settings.block_shape), mats);
}

CompressedArray compress_coefficients(const BlockedArray& coefficients,
                                      const CodecSettings& settings) {
  settings.validate(coefficients.original_shape().rank());
  if (!(coefficients.block_shape() == settings.block_shape)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "coefficient blocks do not match the settings' block shape");
  }
  Binned binned = bin(coefficients, settings.index_kind, settings.float_kind);
  auto flat = prune_and_flatten(binned.indices, settings.mask);
  return CompressedArray(coefficients.original_shape(), settings,
                         std::move(binned.maxima), std::move(flat));
}

CompressedArray compress(const DenseArray& a, const CodecSettings& settings) {
  return compress_coefficients(coefficients_of(a, settings), settings);
}

BlockedArray specified_coefficients(const CompressedArray& a) {
  const auto& settings = a.settings();
  const std::size_t size = settings.block_shape.element_count();
  const auto kept = settings.mask.kept_positions();
  const std::int64_t r = a.radius();
  std::vector<double> data(a.block_count() * size, 0.0);
  a.visit_indices([&](auto f) {
    parallel_for(a.block_count(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        const double n = a.maxima()[k];
        for (std::size_t j = 0; j < kept.size(); ++j) {
          data[k * size + kept[j]] = unbin_value(f[k * kept.size() + j], n, r);
        }
      }
    });
  });
  return BlockedArray(a.original_shape(), settings.block_shape, std::move(data));
}

DenseArray decompress(const CompressedArray& a) {
  const auto& settings = a.settings();
  const std::size_t size = settings.block_shape.element_count();
  const auto kept = settings.mask.kept_positions();
  const double r = static_cast<double>(a.radius());
  // Transform F / r and scale each block by N afterwards, so arrays that
  // differ only in N decompress to exactly proportional blocks.
  std::vector<double> data(a.block_count() * size, 0.0);
  a.visit_indices([&](auto f) {
    for (std::size_t k = 0; k < a.block_count(); ++k) {
      for (std::size_t j = 0; j < kept.size(); ++j) {
        data[k * size + kept[j]] = static_cast<double>(f[k * kept.size() + j]) / r;
      }
    }
  });
  const auto mats = make_transforms(settings.block_shape, settings.transform);
  BlockedArray blocks = inverse_transform(
      BlockedArray(a.original_shape(), settings.block_shape, std::move(data)), mats);
  parallel_for(a.block_count(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double n = a.maxima()[k];
      for (double& v : blocks.block(k)) v *= n;
    }
  });
  return unblock(blocks);
}

}  // namespace blaz
