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

#ifndef BLAZ_FORMAT_HPP
#define BLAZ_FORMAT_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blaz/codec.hpp"

// Bit-packed .bzc stream. Fields are written back to back, least significant
// bit first, and only the end of the stream is padded to a byte:
//
//   type codes   4 bits   float kind (bits 0-1), index kind (bits 2-3)
//   transform    8 bits   0 = DCT, 1 = Haar
//   shape        64 bits per axis, unsigned
//   shape end    64 bits, zero
//   block shape  64 bits per axis
//   mask         1 bit per intrablock position, row-major
//   maxima       float-kind bit pattern per block, row-major grid order
//   indices      two's complement index-kind value per kept position
namespace blaz {

struct LayoutField {
  std::string name;
  std::uint64_t bit_offset;
  std::uint64_t bit_length;
};

struct BitstreamLayout {
  std::vector<LayoutField> fields;

  // Bits before the final byte padding.
  std::uint64_t payload_bits() const;
  std::uint64_t byte_size() const { return (payload_bits() + 7) / 8; }
};

BitstreamLayout layout_of(const CompressedArray& a);

std::vector<std::uint8_t> serialize(const CompressedArray& a);
CompressedArray deserialize(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace blaz

#endif  // BLAZ_FORMAT_HPP
