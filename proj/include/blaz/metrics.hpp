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

#ifndef BLAZ_METRICS_HPP
#define BLAZ_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "blaz/codec.hpp"
#include "blaz/ops.hpp"

namespace blaz {

// Asymptotic ratio u * prod(s) / ((f + b * kept) * prod(ceil(s / i))); it
// depends on the settings only.
double compression_ratio(int input_bits, const CodecSettings& settings,
                         const Shape& shape);

struct RatioReport {
  double closed_form;
  double measured;  // input bits / serialized bits
  std::uint64_t input_bits;
  std::uint64_t serialized_bits;
  std::string settings;
};

RatioReport ratio_report(const CompressedArray& a, int input_bits);

// Per-block predicted bounds and, when the original array is known, the
// observed round-trip error.
struct ErrorReport {
  std::vector<double> bin_bound;         // N_k / (2r + 1)
  std::vector<double> loose_linf;        // max |C_k| * prod(i)
  std::vector<double> l2_coeff_error;    // ||C^_k - C_k||_2, binning + pruning
  std::vector<double> pruning_error;     // ||pruned C_k||_2
  std::vector<double> max_kept_error;    // max |C^ - C| over kept positions
  std::vector<double> observed_l2;       // per-block element error, empty if unknown
  std::vector<double> observed_linf_block;
  double observed_linf = 0.0;
  double observed_l2_total = 0.0;
};

// `original` holds the exact transform coefficients the array was binned
// from (see coefficients_of).
ErrorReport predict_error_bounds(const CompressedArray& a,
                                 const BlockedArray& original);

// Compresses `a`, decompresses it and fills both predicted and observed
// fields. Observed errors are measured against `a` after precision
// conversion.
ErrorReport evaluate_round_trip(const DenseArray& a, const CodecSettings& settings);

// Plain implementations on uncompressed data used as references.
namespace oracle {
double dot(std::span<const double> a, std::span<const double> b);
double mean(std::span<const double> a);
double covariance(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> a);
// Exact 1-D p-Wasserstein distance between the empirical distributions of
// `a` and `b` (equal weight per sample), by integrating the difference of
// their quantile functions.
double wasserstein(std::vector<double> a, std::vector<double> b, double order);
}  // namespace oracle

enum class ErrorClass { kNone, kRebinning, kBlockSize };
std::string_view to_string(ErrorClass c);

struct OracleParams {
  double scalar = 1.0;  // add_scalar / mul_scalar
  ops::WassersteinParams wasserstein{};
  ops::SsimParams ssim{};
  ops::Padding padding = ops::Padding::kIncluded;
};

struct OracleReport {
  std::string operation;
  ErrorClass error_class = ErrorClass::kNone;
  bool array_result = false;
  double compressed = 0.0;  // scalar result, or L-inf of the array result
  double oracle = 0.0;
  double abs_deviation = 0.0;
  double rel_deviation = 0.0;
  // Rebinning bound max_k N'_k / (2r + 1) * prod(i) for rebinned array ops.
  std::optional<double> bound;
};

// Names accepted by compare_against_oracle.
std::span<const std::string_view> oracle_operations();
std::size_t operand_count(std::string_view operation);

// Compresses `operands`, evaluates `operation` in compressed space and on
// the decompressed operands, and reports the deviation.
OracleReport compare_against_oracle(std::string_view operation,
                                    std::span<const DenseArray> operands,
                                    const CodecSettings& settings,
                                    const OracleParams& params = {});

// Same, on operands that are already compressed.
OracleReport compare_compressed(std::string_view operation,
                                std::span<const CompressedArray> operands,
                                const OracleParams& params = {});

std::string format_number(double v);
std::string to_table(std::span<const OracleReport> reports);
std::string to_key_values(const OracleReport& report);
std::string to_key_values(const RatioReport& report);
std::string summarize(const ErrorReport& report);

}  // namespace blaz

#endif  // BLAZ_METRICS_HPP
