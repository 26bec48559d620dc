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

#include "blaz/array_file.hpp"

#include <algorithm>
#include <cstring>

#include "blaz/error.hpp"
#include "blaz/format.hpp"

namespace blaz {

namespace {

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t& pos, int bytes) {
  if (in.size() - pos < static_cast<std::size_t>(bytes)) {
    throw Error(ErrorCode::kTruncatedStream, "truncated array file");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in[pos + i]) << (8 * i);
  pos += static_cast<std::size_t>(bytes);
  return v;
}

}  // namespace

bool has_array_magic(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 4 && std::memcmp(bytes.data(), kArrayMagic, 4) == 0;
}

std::vector<std::uint8_t> encode_array(const DenseArray& a) {
  const int width = bit_width(a.kind()) / 8;
  std::vector<std::uint8_t> out(kArrayMagic, kArrayMagic + 4);
  out.reserve(4 + 8 * (a.shape().rank() + 1) + 1 + a.size() * width);
  put_le(out, a.shape().rank(), 8);
  for (std::size_t e : a.shape().dims()) put_le(out, e, 8);
  out.push_back(static_cast<std::uint8_t>(a.kind()));
  for (double v : a.values()) put_le(out, encode_bits(a.kind(), v), width);
  return out;
}

DenseArray decode_array(std::span<const std::uint8_t> bytes) {
  if (!has_array_magic(bytes)) {
    throw Error(ErrorCode::kInvalidTypeCode, "not an array file (missing BZA1 magic)");
  }
  std::size_t pos = 4;
  const std::uint64_t rank = get_le(bytes, pos, 8);
  if (rank == 0 || rank > (bytes.size() - pos) / 8) {
    throw Error(rank == 0 ? ErrorCode::kInvalidShape : ErrorCode::kTruncatedStream,
                "array file has an invalid rank");
  }
  std::vector<std::size_t> dims(rank);
  std::uint64_t count = 1;
  for (auto& e : dims) {
    e = static_cast<std::size_t>(get_le(bytes, pos, 8));
    if (e == 0) throw Error(ErrorCode::kZeroExtent, "array file has a zero extent");
    // Saturate so a hostile header cannot overflow the element count.
    const std::uint64_t cap = bytes.size() + 1;
    count = e > cap / count ? cap : count * e;
  }
  const std::uint64_t code = get_le(bytes, pos, 1);
  if (code > 3) {
    throw Error(ErrorCode::kInvalidTypeCode,
                "invalid element kind code " + std::to_string(code));
  }
  const auto kind = static_cast<FloatKind>(code);
  const int width = bit_width(kind) / 8;
  if (count > (bytes.size() - pos) / static_cast<std::size_t>(width) ||
      count * width != bytes.size() - pos) {
    throw Error(ErrorCode::kTruncatedStream,
                "array file payload does not match its header");
  }
  std::vector<double> values(count);
  for (auto& v : values) v = decode_bits(kind, get_le(bytes, pos, width));
  return DenseArray(Shape(std::move(dims)), kind, std::move(values));
}

DenseArray read_array(const std::string& path) { return decode_array(read_file(path)); }

void write_array(const std::string& path, const DenseArray& a) {
  write_file(path, encode_array(a));
}

}  // namespace blaz
