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

#ifndef BLAZ_ARRAY_FILE_HPP
#define BLAZ_ARRAY_FILE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blaz/ndarray.hpp"

// Raw uncompressed array file (.bza):
//
//   magic        "BZA1"
//   rank         uint64, little-endian
//   extents      uint64 per axis, little-endian
//   kind         uint8 float-kind code (0 bf16, 1 f16, 2 f32, 3 f64)
//   payload      prod(extents) elements, little-endian, row-major
//
// To bring in data from another container, write its values in this layout;
// tools/npy_to_bza.py does this for .npy files.
namespace blaz {

inline constexpr char kArrayMagic[4] = {'B', 'Z', 'A', '1'};

std::vector<std::uint8_t> encode_array(const DenseArray& a);
DenseArray decode_array(std::span<const std::uint8_t> bytes);
bool has_array_magic(std::span<const std::uint8_t> bytes);

DenseArray read_array(const std::string& path);
void write_array(const std::string& path, const DenseArray& a);

}  // namespace blaz

#endif  // BLAZ_ARRAY_FILE_HPP
