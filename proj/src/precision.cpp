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

#include "blaz/precision.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace blaz {

namespace {

struct Format {
  int mantissa_bits;  // stored fraction bits
  int exponent_bits;
  int min_exponent;  // smallest normal exponent
  int max_exponent;
};

constexpr Format format_of(FloatKind kind) {
  switch (kind) {
    case FloatKind::kBF16:
      return {7, 8, -126, 127};
    case FloatKind::kF16:
      return {10, 5, -14, 15};
    case FloatKind::kF32:
      return {23, 8, -126, 127};
    case FloatKind::kF64:
      return {52, 11, -1022, 1023};
  }
  return {52, 11, -1022, 1023};
}

double round_narrow(const Format& fmt, double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  const int e = std::ilogb(x);
  const int quantum = std::max(e, fmt.min_exponent) - fmt.mantissa_bits;
  // Scaling by a power of two is exact here; nearbyint honours the default
  // round-to-nearest-even mode.
  const double y = std::ldexp(std::nearbyint(std::ldexp(x, -quantum)), quantum);
  const double max_finite =
      std::ldexp(2.0 - std::ldexp(1.0, -fmt.mantissa_bits), fmt.max_exponent);
  if (std::fabs(y) > max_finite) {
    return std::copysign(std::numeric_limits<double>::infinity(), x);
  }
  return y;
}

std::uint64_t encode_narrow(const Format& fmt, double y) {
  const std::uint64_t sign = std::signbit(y) ? 1 : 0;
  const int total = 1 + fmt.exponent_bits + fmt.mantissa_bits;
  const std::uint64_t exp_all = (std::uint64_t{1} << fmt.exponent_bits) - 1;
  const int bias = static_cast<int>(exp_all >> 1);
  std::uint64_t exp_field = 0;
  std::uint64_t mant = 0;
  if (std::isnan(y)) {
    const auto raw = std::bit_cast<std::uint64_t>(y);
    exp_field = exp_all;
    mant = (raw & ((std::uint64_t{1} << 52) - 1)) >> (52 - fmt.mantissa_bits);
    if (mant == 0) mant = std::uint64_t{1} << (fmt.mantissa_bits - 1);
  } else if (std::isinf(y)) {
    exp_field = exp_all;
  } else if (y != 0.0) {
    const double a = std::fabs(y);
    const int e = std::ilogb(a);
    if (e < fmt.min_exponent) {
      mant = static_cast<std::uint64_t>(
          std::ldexp(a, fmt.mantissa_bits - fmt.min_exponent));
    } else {
      exp_field = static_cast<std::uint64_t>(e + bias);
      mant = static_cast<std::uint64_t>(std::ldexp(a, fmt.mantissa_bits - e)) -
             (std::uint64_t{1} << fmt.mantissa_bits);
    }
  }
  return (sign << (total - 1)) | (exp_field << fmt.mantissa_bits) | mant;
}

double decode_narrow(const Format& fmt, std::uint64_t bits) {
  const int total = 1 + fmt.exponent_bits + fmt.mantissa_bits;
  const std::uint64_t exp_all = (std::uint64_t{1} << fmt.exponent_bits) - 1;
  const int bias = static_cast<int>(exp_all >> 1);
  const bool negative = (bits >> (total - 1)) & 1;
  const std::uint64_t exp_field = (bits >> fmt.mantissa_bits) & exp_all;
  const std::uint64_t mant = bits & ((std::uint64_t{1} << fmt.mantissa_bits) - 1);
  double value = 0.0;
  if (exp_field == exp_all) {
    if (mant == 0) {
      value = std::numeric_limits<double>::infinity();
    } else {
      const std::uint64_t raw = (std::uint64_t{0x7FF} << 52) |
                                (mant << (52 - fmt.mantissa_bits));
      value = std::bit_cast<double>(raw);
    }
  } else if (exp_field == 0) {
    value = std::ldexp(static_cast<double>(mant),
                       fmt.min_exponent - fmt.mantissa_bits);
  } else {
    const auto significand =
        static_cast<double>(mant | (std::uint64_t{1} << fmt.mantissa_bits));
    value = std::ldexp(significand,
                       static_cast<int>(exp_field) - bias - fmt.mantissa_bits);
  }
  return negative ? -value : value;
}

}  // namespace

std::string_view to_string(FloatKind kind) {
  switch (kind) {
    case FloatKind::kBF16:
      return "bf16";
    case FloatKind::kF16:
      return "f16";
    case FloatKind::kF32:
      return "f32";
    case FloatKind::kF64:
      return "f64";
  }
  return "?";
}

std::string_view to_string(IndexKind kind) {
  switch (kind) {
    case IndexKind::kI8:
      return "i8";
    case IndexKind::kI16:
      return "i16";
    case IndexKind::kI32:
      return "i32";
    case IndexKind::kI64:
      return "i64";
  }
  return "?";
}

std::optional<FloatKind> parse_float_kind(std::string_view name) {
  if (name == "bf16" || name == "bfloat16") return FloatKind::kBF16;
  if (name == "f16" || name == "fp16") return FloatKind::kF16;
  if (name == "f32" || name == "fp32") return FloatKind::kF32;
  if (name == "f64" || name == "fp64") return FloatKind::kF64;
  return std::nullopt;
}

std::optional<IndexKind> parse_index_kind(std::string_view name) {
  if (name == "i8" || name == "int8") return IndexKind::kI8;
  if (name == "i16" || name == "int16") return IndexKind::kI16;
  if (name == "i32" || name == "int32") return IndexKind::kI32;
  if (name == "i64" || name == "int64") return IndexKind::kI64;
  return std::nullopt;
}

double round_to(FloatKind kind, double value) {
  switch (kind) {
    case FloatKind::kF64:
      return value;
    case FloatKind::kF32:
      return static_cast<double>(static_cast<float>(value));
    case FloatKind::kF16:
    case FloatKind::kBF16:
      return round_narrow(format_of(kind), value);
  }
  return value;
}

std::uint64_t encode_bits(FloatKind kind, double value) {
  switch (kind) {
    case FloatKind::kF64:
      return std::bit_cast<std::uint64_t>(value);
    case FloatKind::kF32:
      return std::bit_cast<std::uint32_t>(static_cast<float>(value));
    case FloatKind::kF16:
    case FloatKind::kBF16:
      return encode_narrow(format_of(kind), round_to(kind, value));
  }
  return 0;
}

double decode_bits(FloatKind kind, std::uint64_t bits) {
  switch (kind) {
    case FloatKind::kF64:
      return std::bit_cast<double>(bits);
    case FloatKind::kF32:
      return static_cast<double>(
          std::bit_cast<float>(static_cast<std::uint32_t>(bits)));
    case FloatKind::kF16:
    case FloatKind::kBF16:
      return decode_narrow(format_of(kind), bits & 0xFFFFu);
  }
  return 0.0;
}

}  // namespace blaz
