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

#ifndef BLAZ_PRECISION_HPP
#define BLAZ_PRECISION_HPP

#include <cstdint>
#include <optional>
#include <string_view>

namespace blaz {

// Element precision of stored floating-point values. Values of every kind
// are held in memory as `double`; narrower kinds are emulated by rounding
// through their encoding.
enum class FloatKind : std::uint8_t { kBF16 = 0, kF16 = 1, kF32 = 2, kF64 = 3 };

// Integer type used for bin indices.
enum class IndexKind : std::uint8_t { kI8 = 0, kI16 = 1, kI32 = 2, kI64 = 3 };

constexpr int bit_width(FloatKind kind) {
  switch (kind) {
    case FloatKind::kBF16:
    case FloatKind::kF16:
      return 16;
    case FloatKind::kF32:
      return 32;
    case FloatKind::kF64:
      return 64;
  }
  return 0;
}

// Significand bits including the implicit leading one.
constexpr int significand_bits(FloatKind kind) {
  switch (kind) {
    case FloatKind::kBF16:
      return 8;
    case FloatKind::kF16:
      return 11;
    case FloatKind::kF32:
      return 24;
    case FloatKind::kF64:
      return 53;
  }
  return 0;
}

constexpr int exponent_bits(FloatKind kind) {
  return bit_width(kind) - significand_bits(kind);
}

constexpr int bit_width(IndexKind kind) {
  switch (kind) {
    case IndexKind::kI8:
      return 8;
    case IndexKind::kI16:
      return 16;
    case IndexKind::kI32:
      return 32;
    case IndexKind::kI64:
      return 64;
  }
  return 0;
}

// Largest bin index magnitude, 2^(b-1) - 1. The range [-r, r] is symmetric
// so index negation never overflows.
constexpr std::int64_t radius(IndexKind kind) {
  const int b = bit_width(kind);
  return b == 64 ? INT64_MAX : (std::int64_t{1} << (b - 1)) - 1;
}

std::string_view to_string(FloatKind kind);
std::string_view to_string(IndexKind kind);
std::optional<FloatKind> parse_float_kind(std::string_view name);
std::optional<IndexKind> parse_index_kind(std::string_view name);

// Rounds to the nearest value representable in `kind`, ties to even.
// Overflow becomes a signed infinity; NaN stays NaN.
double round_to(FloatKind kind, double value);

// Bit pattern of `value` in `kind`'s IEEE-style encoding (low bits of the
// result). `value` is rounded first.
std::uint64_t encode_bits(FloatKind kind, double value);

// Inverse of encode_bits. Only the low bit_width(kind) bits are read.
double decode_bits(FloatKind kind, std::uint64_t bits);

}  // namespace blaz

#endif  // BLAZ_PRECISION_HPP
