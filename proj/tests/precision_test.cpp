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

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "blaz/precision.hpp"

namespace blaz {
namespace {

// Independent reference: decode every 16-bit pattern from its fields, then
// round by nearest-neighbour search with ties broken towards an even
// significand.
struct Table16 {
  int mantissa_bits;
  int exponent_bits;
  std::vector<double> finite;         // non-negative finite values, ascending
  std::vector<std::uint16_t> patterns;  // matching bit patterns
  double overflow;                    // first value past the largest finite

  Table16(int mbits, int ebits) : mantissa_bits(mbits), exponent_bits(ebits) {
    const int bias = (1 << (ebits - 1)) - 1;
    for (std::uint32_t p = 0; p < (1u << (mbits + ebits)); ++p) {
      const std::uint32_t e = p >> mbits;
      const std::uint32_t m = p & ((1u << mbits) - 1);
      if (e == (1u << ebits) - 1) continue;
      double v = e == 0 ? m * std::pow(2.0, 1 - bias - mbits)
                        : (1.0 + m * std::pow(2.0, -mbits)) * std::pow(2.0, int(e) - bias);
      finite.push_back(v);
      patterns.push_back(static_cast<std::uint16_t>(p));
    }
    overflow = std::pow(2.0, bias + 1);
  }

  double round(double x) const {
    const double a = std::fabs(x);
    auto it = std::lower_bound(finite.begin(), finite.end(), a);
    double result;
    if (it == finite.end()) {
      const double top = finite.back();
      // The "next" value has an even significand, so ties go past the top.
      result = (a - top) < (overflow - a) ? top : INFINITY;
    } else if (*it == a || it == finite.begin()) {
      result = *it;
    } else {
      const double hi = *it;
      const double lo = *(it - 1);
      const auto hi_pat = patterns[it - finite.begin()];
      if (a - lo < hi - a) {
        result = lo;
      } else if (hi - a < a - lo) {
        result = hi;
      } else {
        result = (hi_pat & 1) ? lo : hi;
      }
    }
    return std::copysign(result, x);
  }

  double decode(std::uint16_t p) const {
    const double v = finite[p & 0x7FFF];
    return (p & 0x8000) ? -v : v;
  }
};

const Table16& half_table() {
  static const Table16 t(10, 5);
  return t;
}
const Table16& bf16_table() {
  static const Table16 t(7, 8);
  return t;
}

TEST_CASE("kind properties") {
  CHECK(bit_width(FloatKind::kBF16) == 16);
  CHECK(bit_width(FloatKind::kF16) == 16);
  CHECK(bit_width(FloatKind::kF32) == 32);
  CHECK(bit_width(FloatKind::kF64) == 64);
  CHECK(radius(IndexKind::kI8) == 127);
  CHECK(radius(IndexKind::kI16) == 32767);
  CHECK(radius(IndexKind::kI32) == 2147483647);
  CHECK(radius(IndexKind::kI64) == std::numeric_limits<std::int64_t>::max());
  CHECK(parse_float_kind("bfloat16") == FloatKind::kBF16);
  CHECK(parse_index_kind("i64") == IndexKind::kI64);
  CHECK_FALSE(parse_float_kind("f8").has_value());
}

TEST_CASE("f64 conversion is the identity") {
  for (double v : {1.0, 2.0, 1.0 / 3.0, -1e300, 5e-324}) {
    CHECK(round_to(FloatKind::kF64, v) == v);
  }
}

TEST_CASE("one third in bfloat16 matches the reference rounding") {
  const double third = 1.0 / 3.0;
  const double expected = bf16_table().round(third);
  CHECK(round_to(FloatKind::kBF16, third) == expected);
  CHECK(expected == 0.333984375);
}

TEST_CASE("f16 overflow becomes infinity") {
  CHECK(std::isinf(round_to(FloatKind::kF16, 70000.0)));
  CHECK(round_to(FloatKind::kF16, 65504.0) == 65504.0);
  CHECK(round_to(FloatKind::kF16, 65519.0) == 65504.0);
  CHECK(std::isinf(round_to(FloatKind::kF16, 65520.0)));
  CHECK(std::isinf(round_to(FloatKind::kF16, -1e10)));
  CHECK(std::signbit(round_to(FloatKind::kF16, -1e10)));
}

TEST_CASE("16-bit rounding agrees with brute-force search") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-30, 20);
  for (int i = 0; i < 200000; ++i) {
    const double x = std::ldexp(mant(rng), expo(rng));
    REQUIRE(round_to(FloatKind::kF16, x) == half_table().round(x));
    REQUIRE(round_to(FloatKind::kBF16, x) == bf16_table().round(x));
  }
  // Exact midpoints between neighbours exercise the tie rule.
  const auto& t = half_table();
  for (std::size_t k = 1; k + 1 < t.finite.size(); k += 37) {
    const double mid = 0.5 * (t.finite[k] + t.finite[k + 1]);
    REQUIRE(round_to(FloatKind::kF16, mid) == t.round(mid));
  }
}

TEST_CASE("bit encodings agree with the reference tables") {
  for (FloatKind kind : {FloatKind::kF16, FloatKind::kBF16}) {
    const Table16& t = kind == FloatKind::kF16 ? half_table() : bf16_table();
    for (std::uint32_t p = 0; p < 0x10000; ++p) {
      const std::uint32_t exp_mask = ((1u << t.exponent_bits) - 1) << t.mantissa_bits;
      const double v = decode_bits(kind, p);
      if ((p & exp_mask) == exp_mask) {
        const bool is_inf = (p & ((1u << t.mantissa_bits) - 1)) == 0;
        REQUIRE((is_inf ? std::isinf(v) : std::isnan(v)));
        REQUIRE(encode_bits(kind, v) == p);
        continue;
      }
      REQUIRE(v == t.decode(static_cast<std::uint16_t>(p)));
      REQUIRE(encode_bits(kind, v) == p);
    }
  }
}

TEST_CASE("f32 and f64 bit patterns") {
  CHECK(encode_bits(FloatKind::kF32, 1.0) == 0x3F800000u);
  CHECK(decode_bits(FloatKind::kF32, 0xC0000000u) == -2.0);
  CHECK(encode_bits(FloatKind::kF64, 1.0) == 0x3FF0000000000000ull);
  const double nan_payload = std::bit_cast<double>(0x7FF8000000000123ull);
  CHECK(encode_bits(FloatKind::kF64, nan_payload) == 0x7FF8000000000123ull);
}

TEST_CASE("conversion is idempotent") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1e5, 1e5);
  for (int i = 0; i < 10000; ++i) {
    const double x = dist(rng);
    for (FloatKind k : {FloatKind::kBF16, FloatKind::kF16, FloatKind::kF32}) {
      const double once = round_to(k, x);
      REQUIRE(round_to(k, once) == once);
    }
  }
}

}  // namespace
}  // namespace blaz
