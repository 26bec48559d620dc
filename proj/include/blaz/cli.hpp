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

#ifndef BLAZ_CLI_HPP
#define BLAZ_CLI_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "blaz/codec.hpp"

namespace blaz::cli {

enum class Measure { kL2, kWasserstein };

// Distances between adjacent snapshots. Row t holds the distances between
// snapshots t and t + 1: one value for L2, one per order for Wasserstein.
// The L2 distance is computed in compressed space as ||a + (-b)||.
std::vector<std::vector<double>> timeseries_distances(
    std::span<const CompressedArray> snapshots, Measure measure,
    std::span<const double> orders);

// "full", "none", "first:K" or the path of a text file holding one 0/1
// character per intrablock position (other characters are ignored).
PruningMask parse_mask(const std::string& spec, const Shape& block_shape);

// Comma-separated extents, e.g. "4,4,4".
Shape parse_shape(const std::string& text);

// Entry point shared by the executable and the tests. `args` excludes the
// program name. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blaz::cli

#endif  // BLAZ_CLI_HPP
