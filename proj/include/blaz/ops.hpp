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

#ifndef BLAZ_OPS_HPP
#define BLAZ_OPS_HPP

#include <vector>

#include "blaz/codec.hpp"

// Operations evaluated directly on compressed arrays. None of them
// reconstructs the uncompressed array; they work on the block maxima and bin
// indices, relying on the transform being orthonormal and on the first basis
// vector being constant.
namespace blaz::ops {

// How statistics treat zero padding when the shape is not a multiple of the
// block shape.
enum class Padding {
  // Averages over every element of every block, padding included. Exact for
  // shapes that are multiples of the block shape.
  kIncluded,
  // Divides block sums by the unpadded element count instead.
  kCorrected,
};

struct SsimParams {
  double luminance_stabilizer = 1e-4;  // (0.01 * L)^2 with L = 1
  double contrast_stabilizer = 9e-4;   // (0.03 * L)^2 with L = 1
  double luminance_weight = 1.0;
  double contrast_weight = 1.0;
  double structure_weight = 1.0;

  // Standard stabilizers for data spanning `data_range`.
  static SsimParams for_range(double data_range);
};

struct SsimTerms {
  double luminance;
  double contrast;
  double structure;
  double index;
};

struct WassersteinParams {
  double order = 1.0;
  // Block means are softmax-normalised when |sum - 1| exceeds this.
  double normalization_tolerance = 1e-6;
};

CompressedArray negate(const CompressedArray& a);

// Sums specified coefficients and rebins each block against its new maximum.
CompressedArray add(const CompressedArray& a, const CompressedArray& b);

// Adds x to every element by shifting each block's first coefficient by
// x * sqrt(prod(i)). Maxima are taken after the shift so indices stay in
// [-r, r].
CompressedArray add_scalar(const CompressedArray& a, double x);

// {s, i, N * |x|, F * sign(x)}. Exact apart from rounding N.
CompressedArray mul_scalar(const CompressedArray& a, double x);

double dot(const CompressedArray& a, const CompressedArray& b);

// Per-block means, first coefficient / sqrt(prod(i)), in grid order.
std::vector<double> block_means(const CompressedArray& a);

double mean(const CompressedArray& a, Padding padding = Padding::kIncluded);
double covariance(const CompressedArray& a, const CompressedArray& b,
                  Padding padding = Padding::kIncluded);
double variance(const CompressedArray& a, Padding padding = Padding::kIncluded);
double l2_norm(const CompressedArray& a);
double cosine_similarity(const CompressedArray& a, const CompressedArray& b);

SsimTerms ssim_terms(const CompressedArray& a, const CompressedArray& b,
                     const SsimParams& params = {},
                     Padding padding = Padding::kIncluded);
double ssim(const CompressedArray& a, const CompressedArray& b,
            const SsimParams& params = {}, Padding padding = Padding::kIncluded);

// SSIM from precomputed statistics; shared with the uncompressed oracle.
SsimTerms ssim_from_moments(double mean_a, double mean_b, double var_a,
                            double var_b, double cov_ab, const SsimParams& params);

// p-order distance between the sorted block-mean distributions of a and b.
double approx_wasserstein(const CompressedArray& a, const CompressedArray& b,
                          const WassersteinParams& params = {});

// Softmax with the maximum subtracted first.
std::vector<double> softmax(std::vector<double> values);

// (mean(|u - v|^p))^(1/p) over two equally long sorted sequences, evaluated
// relative to the largest difference so large orders do not underflow.
double sorted_power_mean(const std::vector<double>& u, const std::vector<double>& v,
                         double order);

}  // namespace blaz::ops

#endif  // BLAZ_OPS_HPP
