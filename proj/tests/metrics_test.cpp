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
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "blaz/codec.hpp"
#include "blaz/error.hpp"
#include "blaz/metrics.hpp"
#include "blaz/ops.hpp"
#include "test_util.hpp"

namespace blaz {
namespace {

TEST_CASE("closed-form ratio examples") {
  const Shape s{3, 224, 224};
  const auto full = CodecSettings::make(Shape{4, 4, 4}, FloatKind::kF32, IndexKind::kI16);
  CHECK(std::fabs(compression_ratio(64, full, s) - 2.91) < 0.01);
  CodecSettings half = CodecSettings::make(Shape{4, 4, 4}, FloatKind::kF32, IndexKind::kI8);
  half.mask = PruningMask::first(half.block_shape, 32);
  CHECK(std::fabs(compression_ratio(64, half, s) - 10.66) < 0.01);
  const auto unit = CodecSettings::make(Shape{1, 1}, FloatKind::kF64, IndexKind::kI64);
  CHECK(compression_ratio(64, unit, Shape{7, 3}) == 0.5);
}

TEST_CASE("measured ratio approaches the closed form") {
  const auto settings = CodecSettings::make(Shape{4, 4, 4}, FloatKind::kF32, IndexKind::kI16);
  const RatioReport small = ratio_report(compress(DenseArray::zeros(Shape{4, 4, 4}), settings), 64);
  const RatioReport large =
      ratio_report(compress(DenseArray::zeros(Shape{3, 224, 224}), settings), 64);
  CHECK(small.measured < small.closed_form);
  CHECK(std::fabs(large.measured / large.closed_form - 1.0) <
        std::fabs(small.measured / small.closed_form - 1.0));
  CHECK(std::fabs(large.measured / large.closed_form - 1.0) < 0.01);
  CHECK(large.input_bits == 64ull * 3 * 224 * 224);
}

TEST_CASE("error predictions") {
  const auto settings = CodecSettings::make(Shape{4}, FloatKind::kF64, IndexKind::kI8);
  const BlockedArray c(Shape{8}, Shape{4}, {16, 4, -2, 1, 0, 0, 0, 0});
  const CompressedArray a = compress_coefficients(c, settings);
  const ErrorReport r = predict_error_bounds(a, c);
  CHECK(r.bin_bound[0] == doctest::Approx(16.0 / 255.0));
  CHECK(r.loose_linf[0] == 64.0);
  CHECK(r.bin_bound[1] == 0.0);
  CHECK(r.loose_linf[1] == 0.0);
  CHECK(r.l2_coeff_error[1] == 0.0);
  // The largest coefficient maps to index r and carries no error.
  CHECK(specified_coefficients(a).block(0)[0] == 16.0);
  CHECK(r.max_kept_error[0] <= 16.0 / 254.0);
}

TEST_CASE("pruning error equals the dropped coefficients") {
  CodecSettings settings = CodecSettings::make(Shape{4}, FloatKind::kF64, IndexKind::kI16);
  settings.mask = PruningMask::first(Shape{4}, 2);
  const BlockedArray c(Shape{4}, Shape{4}, {2, 1, 0.5, -0.25});
  const ErrorReport r = predict_error_bounds(compress_coefficients(c, settings), c);
  CHECK(r.pruning_error[0] == doctest::Approx(std::sqrt(0.25 + 0.0625)));
  CHECK(r.l2_coeff_error[0] >= r.pruning_error[0]);
}

TEST_CASE("observed error follows the coefficient error") {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rank = 1 + trial % 3;
    const Shape s = testing::random_shape(rank, rank == 3 ? 9 : 20, rng);
    auto settings = CodecSettings::make(testing::random_block(rank, 8, rng), FloatKind::kF64,
                                        trial % 2 ? IndexKind::kI8 : IndexKind::kI16);
    if (trial % 4 == 3) {
      settings.mask = PruningMask::first(settings.block_shape,
                                         1 + settings.block_shape.element_count() / 3);
    }
    const DenseArray a = testing::random_array(s, rng);
    const ErrorReport r = evaluate_round_trip(a, settings);
    const std::int64_t radius_ = radius(settings.index_kind);
    for (std::size_t k = 0; k < r.observed_l2.size(); ++k) {
      REQUIRE(r.observed_l2[k] <= r.l2_coeff_error[k] + 1e-12);
      REQUIRE(r.observed_linf_block[k] <= r.loose_linf[k] + 1e-12);
      REQUIRE(r.max_kept_error[k] <= r.bin_bound[k] * (2.0 * radius_ + 1) / (2.0 * radius_) *
                                         (1 + 1e-12));
    }
  }
}

TEST_CASE("oracle helpers") {
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{2, 0, 1, 1};
  CHECK(oracle::dot(a, b) == 9.0);
  CHECK(oracle::mean(a) == 2.5);
  CHECK(oracle::covariance(a, a) == doctest::Approx(1.25));
  CHECK(oracle::l2_norm(b) == doctest::Approx(std::sqrt(6.0)));
  // Samples of different sizes: {0, 1} against {0, 0.5, 1} in W1.
  CHECK(oracle::wasserstein({0, 1}, {0, 0.5, 1}, 1.0) == doctest::Approx(1.0 / 6.0));
  CHECK(oracle::wasserstein({0, 1}, {1, 0}, 2.0) == 0.0);
}

TEST_CASE("operations against the uncompressed oracle") {
  std::mt19937_64 rng(101);
  const auto settings = CodecSettings::make(Shape{4, 4}, FloatKind::kF64, IndexKind::kI16);
  const DenseArray a = testing::random_array(Shape{16, 8}, rng);
  const DenseArray b = testing::random_array(Shape{16, 8}, rng, 0.5, 2.0);
  const DenseArray pair[] = {a, b};
  for (std::string_view op : oracle_operations()) {
    const std::span<const DenseArray> operands(pair, operand_count(op));
    const OracleReport r = compare_against_oracle(op, operands, settings);
    CHECK(r.operation == op);
    if (op == "negate") {
      CHECK(r.abs_deviation == 0.0);
    } else if (r.error_class == ErrorClass::kNone) {
      CHECK_MESSAGE(r.rel_deviation < 1e-6, op);
    } else if (r.error_class == ErrorClass::kRebinning) {
      REQUIRE(r.bound.has_value());
      CHECK_MESSAGE(r.abs_deviation <= *r.bound, op);
    }
  }
  CHECK(compare_against_oracle("dot", pair, settings).error_class == ErrorClass::kNone);
  CHECK(compare_against_oracle("add", pair, settings).error_class == ErrorClass::kRebinning);
  CHECK(compare_against_oracle("wasserstein", pair, settings).error_class ==
        ErrorClass::kBlockSize);
  CHECK_THROWS_AS(operand_count("sqrt"), Error);
}

TEST_CASE("report formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(384) == "384");
  OracleReport r;
  r.operation = "dot";
  r.compressed = 1.0;
  r.oracle = 1.0;
  const std::string kv = to_key_values(r);
  CHECK(kv.find("operation=dot") != std::string::npos);
  CHECK(kv.find("error_class=none") != std::string::npos);
  const std::string table = to_table(std::span(&r, 1));
  CHECK(table.find("dot") != std::string::npos);
}

}  // namespace
}  // namespace blaz
