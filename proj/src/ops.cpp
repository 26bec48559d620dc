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

#include "blaz/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <utility>

#include "blaz/error.hpp"
#include "blaz/parallel.hpp"

namespace blaz::ops {

namespace {

// Sums fn(k) over all blocks. Partial results are combined in block order so
// the total does not depend on the thread count.
template <typename Fn>
double reduce_blocks(std::size_t blocks, Fn&& fn) {
  std::vector<double> partial(blocks);
  parallel_for(blocks, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) partial[k] = fn(k);
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

// Sums several per-block quantities at once, each in block order.
template <std::size_t N, class Fn>
std::array<double, N> reduce_blocks_n(std::size_t blocks, Fn&& fn) {
  std::vector<std::array<double, N>> partial(blocks);
  parallel_for(blocks, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) partial[k] = fn(k);
  });
  std::array<double, N> total{};
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < N; ++i) total[i] += p[i];
  }
  return total;
}

void require_same_layout(const CompressedArray& a, const CompressedArray& b,
                         bool require_index_kind) {
  std::string diff;
  const auto& sa = a.settings();
  const auto& sb = b.settings();
  if (!(a.original_shape() == b.original_shape())) {
    diff += " shape " + a.original_shape().to_string() + " vs " +
            b.original_shape().to_string() + ";";
  }
  if (!(sa.block_shape == sb.block_shape)) {
    diff += " block " + sa.block_shape.to_string() + " vs " +
            sb.block_shape.to_string() + ";";
  }
  if (!(sa.mask == sb.mask)) diff += " pruning mask differs;";
  if (sa.transform != sb.transform) {
    diff += " transform " + std::string(to_string(sa.transform)) + " vs " +
            std::string(to_string(sb.transform)) + ";";
  }
  if (require_index_kind && sa.index_kind != sb.index_kind) {
    diff += " index " + std::string(to_string(sa.index_kind)) + " vs " +
            std::string(to_string(sb.index_kind)) + ";";
  }
  if (!diff.empty()) {
    diff.pop_back();
    throw Error(ErrorCode::kSettingsMismatch, "operands differ:" + diff);
  }
}

void require_first_kept(const CompressedArray& a) {
  if (!a.settings().mask.keeps_first()) {
    throw Error(ErrorCode::kMaskExcludesMeanCoefficient,
                "pruning mask drops the first coefficient of each block");
  }
}

template <typename Fn>
decltype(auto) visit_pair(const CompressedArray& a, const CompressedArray& b, Fn&& fn) {
  return a.visit_indices(
      [&](auto fa) -> decltype(auto) {
        return b.visit_indices([&](auto fb) -> decltype(auto) { return fn(fa, fb); });
      });
}

// Sum of f_j * g_j over kept positions [from, kept) of block k.
template <typename A, typename B>
double index_dot(A fa, B fb, std::size_t k, std::size_t kept, std::size_t from = 0) {
  const auto* x = fa.data() + k * kept;
  const auto* y = fb.data() + k * kept;
  double s = 0.0;
  for (std::size_t j = from; j < kept; ++j) {
    s += static_cast<double>(x[j]) * static_cast<double>(y[j]);
  }
  return s;
}

// Bins a block of kept coefficients against their L-infinity norm.
double rebin(std::span<const double> coeffs, std::int64_t r, FloatKind kind,
             std::span<std::int64_t> out) {
  double n = 0.0;
  bool has_nan = false;
  for (double c : coeffs) {
    has_nan = has_nan || std::isnan(c);
    n = std::max(n, std::fabs(c));
  }
  n = has_nan ? std::numeric_limits<double>::quiet_NaN() : round_to(kind, n);
  for (std::size_t j = 0; j < coeffs.size(); ++j) out[j] = bin_value(coeffs[j], n, r);
  return n;
}

// Applies `update` to the specified coefficients of each block and rebins.
template <typename Update>
CompressedArray rebinned(const CompressedArray& a, Update&& update) {
  const std::size_t kept = a.kept_per_block();
  const std::int64_t r = a.radius();
  const FloatKind kind = a.settings().float_kind;
  std::vector<double> maxima(a.block_count());
  std::vector<std::int64_t> indices(a.index_count());
  parallel_for(a.block_count(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> coeffs(kept);
    for (std::size_t k = begin; k < end; ++k) {
      update(k, std::span<double>(coeffs));
      maxima[k] = rebin(coeffs, r, kind,
                        std::span<std::int64_t>(indices).subspan(k * kept, kept));
    }
  });
  return CompressedArray(a.original_shape(), a.settings(), std::move(maxima),
                         std::move(indices));
}

// Ascending LSD radix sort on the IEEE total order, linear in the count.
void radix_sort(std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) return;
  std::vector<std::uint64_t> keys(n), scratch(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(values[i]);
    keys[i] = (bits >> 63) ? ~bits : bits | (std::uint64_t{1} << 63);
  }
  std::array<std::array<std::size_t, 256>, 8> counts{};
  for (std::uint64_t k : keys) {
    for (int d = 0; d < 8; ++d) ++counts[d][(k >> (8 * d)) & 0xFF];
  }
  for (int d = 0; d < 8; ++d) {
    auto& count = counts[d];
    if (std::find(count.begin(), count.end(), n) != count.end()) continue;
    std::size_t offset = 0;
    for (auto& c : count) offset += std::exchange(c, offset);
    for (std::uint64_t k : keys) scratch[count[(k >> (8 * d)) & 0xFF]++] = k;
    keys.swap(scratch);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t k = keys[i];
    values[i] = std::bit_cast<double>((k >> 63) ? k & ~(std::uint64_t{1} << 63) : ~k);
  }
}

double first_coefficient_sum(const CompressedArray& a) {
  const std::size_t kept = a.kept_per_block();
  const std::int64_t r = a.radius();
  return a.visit_indices([&](auto f) {
    return reduce_blocks(a.block_count(), [&](std::size_t k) {
      return unbin_value(f[k * kept], a.maxima()[k], r);
    });
  });
}

// Divisor for means: padded or unpadded element count.
double element_count(const CompressedArray& a, Padding padding) {
  return static_cast<double>(
      padding == Padding::kIncluded
          ? a.block_count() * a.settings().block_shape.element_count()
          : a.original_shape().element_count());
}

}  // namespace

SsimParams SsimParams::for_range(double data_range) {
  SsimParams p;
  p.luminance_stabilizer = (0.01 * data_range) * (0.01 * data_range);
  p.contrast_stabilizer = (0.03 * data_range) * (0.03 * data_range);
  return p;
}

CompressedArray negate(const CompressedArray& a) {
  std::vector<std::int64_t> indices = a.indices();
  for (auto& f : indices) f = -f;
  return CompressedArray(a.original_shape(), a.settings(),
                         std::vector<double>(a.maxima().begin(), a.maxima().end()),
                         std::move(indices));
}

CompressedArray add(const CompressedArray& a, const CompressedArray& b) {
  require_same_layout(a, b, /*require_index_kind=*/true);
  const std::size_t kept = a.kept_per_block();
  const std::int64_t r = a.radius();
  return visit_pair(a, b, [&](auto fa, auto fb) {
    return rebinned(a, [&](std::size_t k, std::span<double> coeffs) {
      for (std::size_t j = 0; j < kept; ++j) {
        coeffs[j] = unbin_value(fa[k * kept + j], a.maxima()[k], r) +
                    unbin_value(fb[k * kept + j], b.maxima()[k], r);
      }
    });
  });
}

CompressedArray add_scalar(const CompressedArray& a, double x) {
  require_first_kept(a);
  const double shift = x * a.settings().mean_scale();
  const std::size_t kept = a.kept_per_block();
  const std::int64_t r = a.radius();
  return a.visit_indices([&](auto f) {
    return rebinned(a, [&](std::size_t k, std::span<double> coeffs) {
      for (std::size_t j = 0; j < kept; ++j) {
        coeffs[j] = unbin_value(f[k * kept + j], a.maxima()[k], r);
      }
      coeffs[0] += shift;
    });
  });
}

CompressedArray mul_scalar(const CompressedArray& a, double x) {
  const FloatKind kind = a.settings().float_kind;
  const double magnitude = std::fabs(x);
  std::vector<double> maxima(a.maxima().begin(), a.maxima().end());
  for (double& n : maxima) n = round_to(kind, n * magnitude);
  std::vector<std::int64_t> indices = a.indices();
  if (x == 0.0) {
    std::fill(indices.begin(), indices.end(), 0);
  } else if (x < 0.0) {
    for (auto& f : indices) f = -f;
  }
  return CompressedArray(a.original_shape(), a.settings(), std::move(maxima),
                         std::move(indices));
}

double dot(const CompressedArray& a, const CompressedArray& b) {
  require_same_layout(a, b, false);
  const std::size_t kept = a.kept_per_block();
  const double ra = static_cast<double>(a.radius());
  const double rb = static_cast<double>(b.radius());
  return visit_pair(a, b, [&](auto fa, auto fb) {
    return reduce_blocks(a.block_count(), [&](std::size_t k) {
      const double scale = (a.maxima()[k] / ra) * (b.maxima()[k] / rb);
      return scale * index_dot(fa, fb, k, kept);
    });
  });
}

std::vector<double> block_means(const CompressedArray& a) {
  require_first_kept(a);
  const double scale = a.settings().mean_scale();
  const std::size_t kept = a.kept_per_block();
  const std::int64_t r = a.radius();
  std::vector<double> means(a.block_count());
  a.visit_indices([&](auto f) {
    for (std::size_t k = 0; k < means.size(); ++k) {
      means[k] = unbin_value(f[k * kept], a.maxima()[k], r) / scale;
    }
  });
  return means;
}

double mean(const CompressedArray& a, Padding padding) {
  require_first_kept(a);
  const double scale = a.settings().mean_scale();
  const double sum = first_coefficient_sum(a);
  if (padding == Padding::kIncluded) {
    return sum / static_cast<double>(a.block_count()) / scale;
  }
  return sum * scale / element_count(a, padding);
}

double covariance(const CompressedArray& a, const CompressedArray& b,
                  Padding padding) {
  require_same_layout(a, b, false);
  require_first_kept(a);
  const std::size_t kept = a.kept_per_block();
  const double blocks = static_cast<double>(a.block_count());
  if (padding == Padding::kIncluded) {
    // Centre the first coefficients on their average, then average the
    // coefficient products over every padded element.
    const double centre_a = first_coefficient_sum(a) / blocks;
    const double centre_b = first_coefficient_sum(b) / blocks;
    const std::int64_t ra = a.radius();
    const std::int64_t rb = b.radius();
    const double sum = visit_pair(a, b, [&](auto fa, auto fb) {
      return reduce_blocks(a.block_count(), [&](std::size_t k) {
        const double na = a.maxima()[k];
        const double nb = b.maxima()[k];
        const double first = (unbin_value(fa[k * kept], na, ra) - centre_a) *
                             (unbin_value(fb[k * kept], nb, rb) - centre_b);
        const double scale = (na / static_cast<double>(ra)) * (nb / static_cast<double>(rb));
        return first + scale * index_dot(fa, fb, k, kept, 1);
      });
    });
    return sum / element_count(a, padding);
  }
  const double n = element_count(a, padding);
  const double mean_a = mean(a, padding);
  const double mean_b = mean(b, padding);
  return dot(a, b) / n - mean_a * mean_b;
}

double variance(const CompressedArray& a, Padding padding) {
  return covariance(a, a, padding);
}

double l2_norm(const CompressedArray& a) {
  const std::size_t kept = a.kept_per_block();
  const double r = static_cast<double>(a.radius());
  return std::sqrt(a.visit_indices([&](auto f) {
    return reduce_blocks(a.block_count(), [&](std::size_t k) {
      const double scale = a.maxima()[k] / r;
      return scale * scale * index_dot(f, f, k, kept);
    });
  }));
}

double cosine_similarity(const CompressedArray& a, const CompressedArray& b) {
  const double p = dot(a, b);
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::kZeroNormOperand,
                "cosine similarity is undefined for a zero-norm operand");
  }
  return p / (na * nb);
}

SsimTerms ssim_from_moments(double mean_a, double mean_b, double var_a,
                            double var_b, double cov_ab, const SsimParams& params) {
  const double sl = params.luminance_stabilizer;
  const double sc = params.contrast_stabilizer;
  if (sl < 0.0 || sc < 0.0) {
    throw Error(ErrorCode::kInvalidParameter, "SSIM stabilizers must be non-negative");
  }
  // Rounding can leave a tiny negative variance.
  const double sd_a = std::sqrt(std::max(var_a, 0.0));
  const double sd_b = std::sqrt(std::max(var_b, 0.0));
  SsimTerms t{};
  t.luminance = (2.0 * mean_a * mean_b + sl) / (mean_a * mean_a + mean_b * mean_b + sl);
  t.contrast = (2.0 * sd_a * sd_b + sc) / (sd_a * sd_a + sd_b * sd_b + sc);
  t.structure = (cov_ab + sc / 2.0) / (sd_a * sd_b + sc / 2.0);

  auto power = [](double base, double weight, const char* name) {
    if (base < 0.0 && std::floor(weight) != weight) {
      throw Error(ErrorCode::kNegativeBaseWithFractionalWeight,
                  std::string("SSIM ") + name +
                      " term is negative and its weight is not an integer");
    }
    return std::pow(base, weight);
  };
  t.index = power(t.luminance, params.luminance_weight, "luminance") *
            power(t.contrast, params.contrast_weight, "contrast") *
            power(t.structure, params.structure_weight, "structure");
  return t;
}

SsimTerms ssim_terms(const CompressedArray& a, const CompressedArray& b,
                     const SsimParams& params, Padding padding) {
  require_same_layout(a, b, false);
  require_first_kept(a);
  const double mean_a = mean(a, padding);
  const double mean_b = mean(b, padding);
  const std::size_t kept = a.kept_per_block();
  const double n = element_count(a, padding);
  const double ra = static_cast<double>(a.radius());
  const double rb = static_cast<double>(b.radius());
  if (padding == Padding::kIncluded) {
    const double blocks = static_cast<double>(a.block_count());
    const double centre_a = first_coefficient_sum(a) / blocks;
    const double centre_b = first_coefficient_sum(b) / blocks;
    const auto sums = visit_pair(a, b, [&](auto fa, auto fb) {
      return reduce_blocks_n<3>(a.block_count(), [&](std::size_t k) {
        const double na = a.maxima()[k];
        const double nb = b.maxima()[k];
        const double da = unbin_value(fa[k * kept], na, a.radius()) - centre_a;
        const double db = unbin_value(fb[k * kept], nb, b.radius()) - centre_b;
        const double sa = na / ra;
        const double sb = nb / rb;
        double aa = 0.0;
        double bb = 0.0;
        double ab = 0.0;
        for (std::size_t j = k * kept + 1; j < (k + 1) * kept; ++j) {
          const double x = static_cast<double>(fa[j]);
          const double y = static_cast<double>(fb[j]);
          aa += x * x;
          bb += y * y;
          ab += x * y;
        }
        return std::array<double, 3>{da * da + sa * sa * aa, db * db + sb * sb * bb,
                                     da * db + sa * sb * ab};
      });
    });
    return ssim_from_moments(mean_a, mean_b, sums[0] / n, sums[1] / n, sums[2] / n,
                             params);
  }
  const auto sums = visit_pair(a, b, [&](auto fa, auto fb) {
    return reduce_blocks_n<3>(a.block_count(), [&](std::size_t k) {
      const double sa = a.maxima()[k] / ra;
      const double sb = b.maxima()[k] / rb;
      double aa = 0.0;
      double bb = 0.0;
      double ab = 0.0;
      for (std::size_t j = k * kept; j < (k + 1) * kept; ++j) {
        const double x = static_cast<double>(fa[j]);
        const double y = static_cast<double>(fb[j]);
        aa += x * x;
        bb += y * y;
        ab += x * y;
      }
      return std::array<double, 3>{sa * sa * aa, sb * sb * bb, sa * sb * ab};
    });
  });
  return ssim_from_moments(mean_a, mean_b, sums[0] / n - mean_a * mean_a,
                           sums[1] / n - mean_b * mean_b, sums[2] / n - mean_a * mean_b,
                           params);
}

double ssim(const CompressedArray& a, const CompressedArray& b,
            const SsimParams& params, Padding padding) {
  return ssim_terms(a, b, params, padding).index;
}

std::vector<double> softmax(std::vector<double> values) {
  if (values.empty()) return values;
  const double top = *std::max_element(values.begin(), values.end());
  double total = 0.0;
  for (double& v : values) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : values) v /= total;
  return values;
}

double sorted_power_mean(const std::vector<double>& u, const std::vector<double>& v,
                         double order) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kLengthMismatch, "distributions differ in length");
  }
  if (u.empty()) return 0.0;
  double largest = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    largest = std::max(largest, std::fabs(u[i] - v[i]));
  }
  if (largest == 0.0 || std::isinf(order)) return largest;
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc += std::pow(std::fabs(u[i] - v[i]) / largest, order);
  }
  return largest * std::pow(acc / static_cast<double>(u.size()), 1.0 / order);
}

double approx_wasserstein(const CompressedArray& a, const CompressedArray& b,
                          const WassersteinParams& params) {
  if (!(params.order >= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "Wasserstein order must be >= 1");
  }
  require_same_layout(a, b, false);
  auto normalized = [&](const CompressedArray& x) {
    std::vector<double> means = block_means(x);
    const double total = std::accumulate(means.begin(), means.end(), 0.0);
    if (std::fabs(total - 1.0) > params.normalization_tolerance) {
      means = softmax(std::move(means));
    }
    radix_sort(means);
    return means;
  };
  return sorted_power_mean(normalized(a), normalized(b), params.order);
}

}  // namespace blaz::ops
