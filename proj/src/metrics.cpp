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

#include "blaz/metrics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "blaz/error.hpp"
#include "blaz/format.hpp"

namespace blaz {

double compression_ratio(int input_bits, const CodecSettings& settings,
                         const Shape& shape) {
  const double blocks =
      static_cast<double>(block_grid_for(shape, settings.block_shape).element_count());
  const double per_block =
      bit_width(settings.float_kind) +
      static_cast<double>(bit_width(settings.index_kind)) *
          static_cast<double>(settings.mask.kept_count());
  return static_cast<double>(input_bits) * static_cast<double>(shape.element_count()) /
         (per_block * blocks);
}

RatioReport ratio_report(const CompressedArray& a, int input_bits) {
  RatioReport r;
  r.closed_form = compression_ratio(input_bits, a.settings(), a.original_shape());
  r.input_bits =
      static_cast<std::uint64_t>(input_bits) * a.original_shape().element_count();
  r.serialized_bits = layout_of(a).byte_size() * 8;
  r.measured = static_cast<double>(r.input_bits) / static_cast<double>(r.serialized_bits);
  r.settings = describe(a.settings());
  return r;
}

ErrorReport predict_error_bounds(const CompressedArray& a, const BlockedArray& original) {
  const auto& settings = a.settings();
  if (original.block_count() != a.block_count() ||
      !(original.block_shape() == settings.block_shape)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "coefficients do not match the compressed array's blocks");
  }
  const BlockedArray specified = specified_coefficients(a);
  const std::size_t blocks = a.block_count();
  const double width = 2.0 * static_cast<double>(a.radius()) + 1.0;
  const double block_size = static_cast<double>(settings.block_shape.element_count());
  const auto& bits = settings.mask.bits();

  ErrorReport report;
  report.bin_bound.resize(blocks);
  report.loose_linf.resize(blocks);
  report.l2_coeff_error.resize(blocks);
  report.pruning_error.resize(blocks);
  report.max_kept_error.resize(blocks);
  for (std::size_t k = 0; k < blocks; ++k) {
    const auto c = original.block(k);
    const auto chat = specified.block(k);
    double linf = 0.0, err2 = 0.0, pruned2 = 0.0, kept_max = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      linf = std::max(linf, std::fabs(c[j]));
      const double e = chat[j] - c[j];
      err2 += e * e;
      if (bits[j]) {
        kept_max = std::max(kept_max, std::fabs(e));
      } else {
        pruned2 += c[j] * c[j];
      }
    }
    report.bin_bound[k] = a.maxima()[k] / width;
    report.loose_linf[k] = linf * block_size;
    report.l2_coeff_error[k] = std::sqrt(err2);
    report.pruning_error[k] = std::sqrt(pruned2);
    report.max_kept_error[k] = kept_max;
  }
  return report;
}

ErrorReport evaluate_round_trip(const DenseArray& a, const CodecSettings& settings) {
  const BlockedArray coeffs = coefficients_of(a, settings);
  const CompressedArray compressed = compress_coefficients(coeffs, settings);
  ErrorReport report = predict_error_bounds(compressed, coeffs);

  const BlockedArray reference =
      block(convert_precision(a, settings.float_kind), settings.block_shape);
  const BlockedArray restored = block(decompress(compressed), settings.block_shape);
  report.observed_l2.resize(reference.block_count());
  report.observed_linf_block.resize(reference.block_count());
  double total2 = 0.0;
  for (std::size_t k = 0; k < reference.block_count(); ++k) {
    const auto x = reference.block(k);
    const auto y = restored.block(k);
    double e2 = 0.0, einf = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double e = y[j] - x[j];
      e2 += e * e;
      einf = std::max(einf, std::fabs(e));
    }
    report.observed_l2[k] = std::sqrt(e2);
    report.observed_linf_block[k] = einf;
    report.observed_linf = std::max(report.observed_linf, einf);
    total2 += e2;
  }
  report.observed_l2_total = std::sqrt(total2);
  return report;
}

namespace oracle {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double mean(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s / static_cast<double>(a.size());
}

double covariance(std::span<const double> a, std::span<const double> b) {
  const double ma = mean(a);
  const double mb = mean(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / static_cast<double>(a.size());
}

double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double wasserstein(std::vector<double> a, std::vector<double> b, double order) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kLengthMismatch, "empty distribution");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::uint64_t n = a.size();
  const std::uint64_t m = b.size();
  // Quantile functions are step functions with jumps at i/n and j/m; walk
  // the merged breakpoints and integrate |Qa - Qb|^p piecewise.
  struct Piece {
    double length;
    double diff;
  };
  std::vector<Piece> pieces;
  std::uint64_t i = 0, j = 0;
  double previous = 0.0;
  while (i < n && j < m) {
    const std::uint64_t next_a = (i + 1) * m;  // (i+1)/n scaled by n*m
    const std::uint64_t next_b = (j + 1) * n;
    const std::uint64_t next = std::min(next_a, next_b);
    const double t = static_cast<double>(next) / static_cast<double>(n * m);
    pieces.push_back({t - previous, std::fabs(a[i] - b[j])});
    previous = t;
    if (next_a == next) ++i;
    if (next_b == next) ++j;
  }
  double largest = 0.0;
  for (const auto& p : pieces) largest = std::max(largest, p.diff);
  if (largest == 0.0) return 0.0;
  if (std::isinf(order)) return largest;
  double acc = 0.0;
  for (const auto& p : pieces) acc += p.length * std::pow(p.diff / largest, order);
  return largest * std::pow(acc, 1.0 / order);
}

}  // namespace oracle

std::string_view to_string(ErrorClass c) {
  switch (c) {
    case ErrorClass::kNone:
      return "none";
    case ErrorClass::kRebinning:
      return "rebinning";
    case ErrorClass::kBlockSize:
      return "block-size";
  }
  return "?";
}

namespace {

constexpr std::array<std::string_view, 12> kOperations = {
    "negate", "add",  "add_scalar",        "mul_scalar", "dot",  "mean",
    "covariance", "variance", "l2_norm", "cosine_similarity", "ssim", "wasserstein"};

double relative(double abs_dev, double reference) {
  return abs_dev / std::max(std::fabs(reference), 1e-12);
}

double linf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

std::vector<double> normalized_for_wasserstein(std::span<const double> values,
                                               double tolerance) {
  std::vector<double> v(values.begin(), values.end());
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (std::fabs(total - 1.0) > tolerance) v = ops::softmax(std::move(v));
  return v;
}

OracleReport array_report(std::string_view op, ErrorClass cls,
                          const CompressedArray& result,
                          std::span<const double> expected) {
  const DenseArray got = decompress(result);
  OracleReport r;
  r.operation = std::string(op);
  r.error_class = cls;
  r.array_result = true;
  double dev = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    dev = std::max(dev, std::fabs(got[i] - expected[i]));
  }
  r.compressed = linf(got.values());
  r.oracle = linf(expected);
  r.abs_deviation = dev;
  r.rel_deviation = relative(dev, r.oracle);
  if (cls == ErrorClass::kRebinning) {
    const double width = 2.0 * static_cast<double>(result.radius()) + 1.0;
    const double size =
        static_cast<double>(result.settings().block_shape.element_count());
    double n_max = 0.0;
    for (double n : result.maxima()) n_max = std::max(n_max, n);
    r.bound = n_max / width * size;
  }
  return r;
}

}  // namespace

std::span<const std::string_view> oracle_operations() { return kOperations; }

std::size_t operand_count(std::string_view operation) {
  if (operation == "negate" || operation == "add_scalar" || operation == "mul_scalar" ||
      operation == "mean" || operation == "variance" || operation == "l2_norm") {
    return 1;
  }
  if (std::find(kOperations.begin(), kOperations.end(), operation) != kOperations.end()) {
    return 2;
  }
  throw Error(ErrorCode::kUnknownOperation,
              "unknown operation '" + std::string(operation) + "'");
}

OracleReport compare_compressed(std::string_view op,
                                std::span<const CompressedArray> operands,
                                const OracleParams& params) {
  const std::size_t needed = operand_count(op);
  if (operands.size() != needed) {
    throw Error(ErrorCode::kInvalidParameter,
                std::string(op) + " takes " + std::to_string(needed) + " operand(s)");
  }
  const CompressedArray& ca = operands[0];
  const DenseArray da = decompress(ca);
  const auto a = da.values();
  DenseArray db;
  std::span<const double> b;
  if (needed == 2) {
    db = decompress(operands[1]);
    b = db.values();
  }

  if (op == "negate") {
    std::vector<double> e(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) e[i] = -a[i];
    return array_report(op, ErrorClass::kNone, ops::negate(ca), e);
  }
  if (op == "add") {
    std::vector<double> e(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) e[i] = a[i] + b[i];
    return array_report(op, ErrorClass::kRebinning, ops::add(ca, operands[1]), e);
  }
  if (op == "add_scalar") {
    std::vector<double> e(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) e[i] = a[i] + params.scalar;
    return array_report(op, ErrorClass::kRebinning, ops::add_scalar(ca, params.scalar),
                        e);
  }
  if (op == "mul_scalar") {
    std::vector<double> e(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) e[i] = a[i] * params.scalar;
    return array_report(op, ErrorClass::kNone, ops::mul_scalar(ca, params.scalar), e);
  }

  OracleReport r;
  r.operation = std::string(op);
  if (op == "dot") {
    r.compressed = ops::dot(ca, operands[1]);
    r.oracle = oracle::dot(a, b);
  } else if (op == "mean") {
    r.compressed = ops::mean(ca, params.padding);
    r.oracle = oracle::mean(a);
  } else if (op == "covariance") {
    r.compressed = ops::covariance(ca, operands[1], params.padding);
    r.oracle = oracle::covariance(a, b);
  } else if (op == "variance") {
    r.compressed = ops::variance(ca, params.padding);
    r.oracle = oracle::covariance(a, a);
  } else if (op == "l2_norm") {
    r.compressed = ops::l2_norm(ca);
    r.oracle = oracle::l2_norm(a);
  } else if (op == "cosine_similarity") {
    r.compressed = ops::cosine_similarity(ca, operands[1]);
    r.oracle = oracle::dot(a, b) / (oracle::l2_norm(a) * oracle::l2_norm(b));
  } else if (op == "ssim") {
    r.compressed = ops::ssim(ca, operands[1], params.ssim, params.padding);
    r.oracle = ops::ssim_from_moments(oracle::mean(a), oracle::mean(b),
                                      oracle::covariance(a, a), oracle::covariance(b, b),
                                      oracle::covariance(a, b), params.ssim)
                   .index;
  } else {  // wasserstein
    r.error_class = ErrorClass::kBlockSize;
    r.compressed = ops::approx_wasserstein(ca, operands[1], params.wasserstein);
    const double tol = params.wasserstein.normalization_tolerance;
    r.oracle = oracle::wasserstein(normalized_for_wasserstein(a, tol),
                                   normalized_for_wasserstein(b, tol),
                                   params.wasserstein.order);
  }
  r.abs_deviation = std::fabs(r.compressed - r.oracle);
  r.rel_deviation = relative(r.abs_deviation, r.oracle);
  return r;
}

OracleReport compare_against_oracle(std::string_view op,
                                    std::span<const DenseArray> operands,
                                    const CodecSettings& settings,
                                    const OracleParams& params) {
  operand_count(op);  // rejects unknown names before compressing
  std::vector<CompressedArray> compressed;
  compressed.reserve(operands.size());
  for (const auto& d : operands) compressed.push_back(compress(d, settings));
  return compare_compressed(op, compressed, params);
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string to_table(std::span<const OracleReport> reports) {
  std::ostringstream out;
  out << std::left << std::setw(18) << "operation" << std::setw(12) << "error"
      << std::setw(26) << "compressed" << std::setw(26) << "oracle" << std::setw(26)
      << "abs_deviation" << std::setw(26) << "rel_deviation" << "bound\n";
  for (const auto& r : reports) {
    out << std::setw(18) << r.operation << std::setw(12) << to_string(r.error_class)
        << std::setw(26) << format_number(r.compressed) << std::setw(26)
        << format_number(r.oracle) << std::setw(26) << format_number(r.abs_deviation)
        << std::setw(26) << format_number(r.rel_deviation)
        << (r.bound ? format_number(*r.bound) : std::string("-")) << '\n';
  }
  return out.str();
}

std::string to_key_values(const OracleReport& r) {
  std::ostringstream out;
  out << "operation=" << r.operation << '\n'
      << "error_class=" << to_string(r.error_class) << '\n'
      << "result=" << (r.array_result ? "array" : "scalar") << '\n'
      << "compressed=" << format_number(r.compressed) << '\n'
      << "oracle=" << format_number(r.oracle) << '\n'
      << "abs_deviation=" << format_number(r.abs_deviation) << '\n'
      << "rel_deviation=" << format_number(r.rel_deviation) << '\n';
  if (r.bound) {
    out << "bound=" << format_number(*r.bound) << '\n'
        << "within_bound=" << (r.abs_deviation <= *r.bound ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string to_key_values(const RatioReport& r) {
  std::ostringstream out;
  out << "settings=" << r.settings << '\n'
      << "closed_form_ratio=" << format_number(r.closed_form) << '\n'
      << "measured_ratio=" << format_number(r.measured) << '\n'
      << "input_bits=" << r.input_bits << '\n'
      << "serialized_bits=" << r.serialized_bits << '\n';
  return out.str();
}

std::string summarize(const ErrorReport& r) {
  auto max_of = [](const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  };
  std::ostringstream out;
  out << "blocks=" << r.bin_bound.size() << '\n'
      << "max_bin_bound=" << format_number(max_of(r.bin_bound)) << '\n'
      << "max_kept_coefficient_error=" << format_number(max_of(r.max_kept_error)) << '\n'
      << "max_pruning_error_l2=" << format_number(max_of(r.pruning_error)) << '\n'
      << "max_loose_linf_bound=" << format_number(max_of(r.loose_linf)) << '\n'
      << "max_block_l2_coefficient_error=" << format_number(max_of(r.l2_coeff_error))
      << '\n';
  if (!r.observed_l2.empty()) {
    out << "max_block_l2_observed=" << format_number(max_of(r.observed_l2)) << '\n'
        << "observed_linf=" << format_number(r.observed_linf) << '\n'
        << "observed_l2=" << format_number(r.observed_l2_total) << '\n';
  }
  return out.str();
}

}  // namespace blaz
