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

#include <random>
#include <vector>

#include "blaz/error.hpp"
#include "blaz/ndarray.hpp"
#include "test_util.hpp"

namespace blaz {
namespace {

// Element of the padded, blocked layout computed directly from coordinates.
double blocked_reference(const DenseArray& a, const Shape& block_shape,
                         std::size_t block_index, std::size_t offset) {
  const Shape& s = a.shape();
  const Shape grid = block_grid_for(s, block_shape);
  const auto gstr = grid.strides();
  const auto bstr = block_shape.strides();
  const auto sstr = s.strides();
  std::size_t flat = 0;
  for (std::size_t ax = 0; ax < s.rank(); ++ax) {
    const std::size_t g = (block_index / gstr[ax]) % grid[ax];
    const std::size_t o = (offset / bstr[ax]) % block_shape[ax];
    const std::size_t coord = g * block_shape[ax] + o;
    if (coord >= s[ax]) return 0.0;
    flat += coord * sstr[ax];
  }
  return a[flat];
}

TEST_CASE("shape validation") {
  CHECK_THROWS_AS(Shape({}), Error);
  CHECK_THROWS_AS(Shape({3, 0}), Error);
  const Shape s{2, 3, 4};
  CHECK(s.element_count() == 24);
  CHECK(s.strides() == std::vector<std::size_t>{12, 4, 1});
}

TEST_CASE("block grid examples") {
  CHECK(block_grid_for(Shape{3, 224, 224}, Shape{4, 4, 4}) == Shape{1, 56, 56});
  CHECK(block_grid_for(Shape{8}, Shape{8}) == Shape{1});
  CHECK(block_grid_for(Shape{5}, Shape{4}) == Shape{2});
}

TEST_CASE("padding is zero") {
  const DenseArray a(Shape{5}, FloatKind::kF64, {1, 2, 3, 4, 5});
  const BlockedArray b = block(a, Shape{4});
  REQUIRE(b.block_count() == 2);
  const std::vector<double> expected{1, 2, 3, 4, 5, 0, 0, 0};
  CHECK(std::vector<double>(b.data().begin(), b.data().end()) == expected);
  const DenseArray back = unblock(b);
  CHECK(back.shape() == Shape{5});
  CHECK(std::vector<double>(back.values().begin(), back.values().end()) ==
        std::vector<double>{1, 2, 3, 4, 5});
}

TEST_CASE("blocking rejects bad block shapes") {
  const DenseArray a = DenseArray::zeros(Shape{4, 4});
  CHECK_THROWS_AS(block(a, Shape{3, 4}), Error);
  CHECK_THROWS_AS(block(a, Shape{4}), Error);
  try {
    block(a, Shape{4, 6});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonPowerOfTwoBlock);
  }
}

TEST_CASE("blocking matches coordinate reference and round-trips") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rank = 1 + trial % 4;
    const Shape s = testing::random_shape(rank, rank == 4 ? 6 : 13, rng);
    const Shape i = testing::random_block(rank, 8, rng);
    const DenseArray a = testing::random_array(s, rng);
    const BlockedArray b = block(a, i);
    for (std::size_t k = 0; k < b.block_count(); ++k) {
      const auto blk = b.block(k);
      for (std::size_t o = 0; o < blk.size(); ++o) {
        REQUIRE(blk[o] == blocked_reference(a, i, k, o));
      }
    }
    const DenseArray back = unblock(b);
    REQUIRE(back.shape() == s);
    for (std::size_t n = 0; n < a.size(); ++n) REQUIRE(back[n] == a[n]);
  }
}

TEST_CASE("zero blocked array unblocks to zeros") {
  const BlockedArray b(Shape{5, 3}, Shape{2, 4}, std::vector<double>(3 * 1 * 8, 0.0));
  const DenseArray d = unblock(b);
  CHECK(d.shape() == Shape{5, 3});
  for (double v : d.values()) CHECK(v == 0.0);
}

TEST_CASE("conversion rounds every element") {
  const DenseArray a(Shape{2}, FloatKind::kF64, {1.0 / 3.0, 70000.0});
  const DenseArray h = convert_precision(a, FloatKind::kF16);
  CHECK(h.kind() == FloatKind::kF16);
  CHECK(h[0] == round_to(FloatKind::kF16, 1.0 / 3.0));
  CHECK(std::isinf(h[1]));
  const DenseArray same = convert_precision(a, FloatKind::kF64);
  CHECK(same[0] == 1.0 / 3.0);
}

TEST_CASE("gradient examples") {
  const DenseArray g3 = gradient_array(Shape{3});
  CHECK(g3[0] == 0.0);
  CHECK(g3[1] == 0.5);
  CHECK(g3[2] == 1.0);
  const DenseArray g22 = gradient_array(Shape{2, 2});
  CHECK(std::vector<double>(g22.values().begin(), g22.values().end()) ==
        std::vector<double>{0, 0.5, 0.5, 1});
  const DenseArray g55 = gradient_array(Shape{5, 5});
  CHECK(g55[24] == 1.0);
  CHECK_THROWS_AS(gradient_array(Shape{1, 1}), Error);
}

TEST_CASE("gradient matches its coordinate formula") {
  const Shape s{3, 5, 4};
  const DenseArray g = gradient_array(s);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 5; ++y)
      for (std::size_t z = 0; z < 4; ++z)
        CHECK(g[x * 20 + y * 4 + z] == doctest::Approx((x + y + z) / 9.0).epsilon(1e-15));
}

}  // namespace
}  // namespace blaz
