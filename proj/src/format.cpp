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

#include "blaz/format.hpp"

#include <fstream>
#include <iterator>
#include <limits>

#include "blaz/error.hpp"

namespace blaz {

namespace {

constexpr int kExtentBits = 64;
constexpr int kTypeBits = 4;
constexpr int kTransformBits = 8;

class BitWriter {
 public:
  explicit BitWriter(std::uint64_t reserve_bits) { bytes_.reserve((reserve_bits + 7) / 8); }

  void put(std::uint64_t value, int bits) {
    while (bits > 0) {
      const int offset = static_cast<int>(position_ & 7);
      if (offset == 0) bytes_.push_back(0);
      const int take = std::min(8 - offset, bits);
      bytes_.back() |= static_cast<std::uint8_t>((value & ((1u << take) - 1)) << offset);
      value = take == 64 ? 0 : value >> take;
      bits -= take;
      position_ += static_cast<std::uint64_t>(take);
    }
  }

  std::vector<std::uint8_t> take() && { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t position_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t remaining() const { return bytes_.size() * 8 - position_; }

  std::uint64_t get(int bits, const char* field) {
    if (remaining() < static_cast<std::uint64_t>(bits)) {
      throw Error(ErrorCode::kTruncatedStream,
                  std::string("truncated stream while reading ") + field);
    }
    std::uint64_t value = 0;
    int got = 0;
    while (got < bits) {
      const int offset = static_cast<int>(position_ & 7);
      const int take = std::min(8 - offset, bits - got);
      const std::uint64_t chunk =
          (static_cast<std::uint64_t>(bytes_[position_ >> 3]) >> offset) &
          ((1u << take) - 1);
      value |= chunk << got;
      got += take;
      position_ += static_cast<std::uint64_t>(take);
    }
    return value;
  }

  std::uint64_t position() const { return position_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t position_ = 0;
};

std::int64_t sign_extend(std::uint64_t raw, int bits) {
  if (bits == 64) return static_cast<std::int64_t>(raw);
  const std::uint64_t sign = std::uint64_t{1} << (bits - 1);
  return static_cast<std::int64_t>((raw ^ sign) - sign);
}

// a * b, or nullopt-like max on overflow.
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  return b > std::numeric_limits<std::uint64_t>::max() - a
             ? std::numeric_limits<std::uint64_t>::max()
             : a + b;
}

}  // namespace

std::uint64_t BitstreamLayout::payload_bits() const {
  if (fields.empty()) return 0;
  return fields.back().bit_offset + fields.back().bit_length;
}

BitstreamLayout layout_of(const CompressedArray& a) {
  const auto& s = a.settings();
  const std::uint64_t d = a.original_shape().rank();
  const std::uint64_t blocks = a.block_count();
  BitstreamLayout layout;
  std::uint64_t offset = 0;
  auto add = [&](std::string name, std::uint64_t length) {
    layout.fields.push_back({std::move(name), offset, length});
    offset += length;
  };
  add("type_codes", kTypeBits);
  add("transform", kTransformBits);
  add("shape", kExtentBits * d);
  add("shape_end", kExtentBits);
  add("block_shape", kExtentBits * d);
  add("mask", s.block_shape.element_count());
  add("maxima", static_cast<std::uint64_t>(bit_width(s.float_kind)) * blocks);
  add("indices", static_cast<std::uint64_t>(bit_width(s.index_kind)) *
                     s.mask.kept_count() * blocks);
  return layout;
}

std::vector<std::uint8_t> serialize(const CompressedArray& a) {
  const auto& s = a.settings();
  BitWriter out(layout_of(a).payload_bits());
  out.put(static_cast<std::uint64_t>(s.float_kind), 2);
  out.put(static_cast<std::uint64_t>(s.index_kind), 2);
  out.put(static_cast<std::uint64_t>(s.transform), kTransformBits);
  for (std::size_t e : a.original_shape().dims()) out.put(e, kExtentBits);
  out.put(0, kExtentBits);
  for (std::size_t e : s.block_shape.dims()) out.put(e, kExtentBits);
  for (bool bit : s.mask.bits()) out.put(bit ? 1 : 0, 1);
  const int float_bits = bit_width(s.float_kind);
  for (double n : a.maxima()) out.put(encode_bits(s.float_kind, n), float_bits);
  const int index_bits = bit_width(s.index_kind);
  a.visit_indices([&](auto indices) {
    for (auto f : indices) {
      out.put(static_cast<std::uint64_t>(static_cast<std::int64_t>(f)), index_bits);
    }
  });
  return std::move(out).take();
}

CompressedArray deserialize(std::span<const std::uint8_t> bytes) {
  BitReader in(bytes);
  const auto float_kind = static_cast<FloatKind>(in.get(2, "float kind"));
  const auto index_kind = static_cast<IndexKind>(in.get(2, "index kind"));
  const std::uint64_t family = in.get(kTransformBits, "transform");
  if (family > static_cast<std::uint64_t>(TransformFamily::kHaar)) {
    throw Error(ErrorCode::kInvalidTypeCode,
                "invalid transform code " + std::to_string(family));
  }

  std::vector<std::size_t> dims;
  for (;;) {
    const std::uint64_t e = in.get(kExtentBits, "shape");
    if (e == 0) break;
    dims.push_back(static_cast<std::size_t>(e));
  }
  if (dims.empty()) {
    throw Error(ErrorCode::kZeroExtent, "shape has no extents before its end marker");
  }
  std::vector<std::size_t> block_dims;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const std::uint64_t e = in.get(kExtentBits, "block shape");
    if (e == 0) throw Error(ErrorCode::kZeroExtent, "block shape has a zero extent");
    block_dims.push_back(static_cast<std::size_t>(e));
  }

  // Check the remaining length before allocating anything sized by the header.
  std::uint64_t mask_bits = 1;
  std::uint64_t blocks = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    mask_bits = checked_mul(mask_bits, block_dims[k]);
    blocks = checked_mul(blocks, (dims[k] + block_dims[k] - 1) / block_dims[k]);
  }
  if (mask_bits > in.remaining()) {
    throw Error(ErrorCode::kTruncatedStream, "truncated stream while reading mask");
  }
  Shape shape(std::move(dims));
  Shape block_shape(std::move(block_dims));
  std::vector<bool> bits(mask_bits);
  for (std::uint64_t j = 0; j < mask_bits; ++j) bits[j] = in.get(1, "mask") != 0;
  PruningMask mask(block_shape, std::move(bits));

  const int float_bits = bit_width(float_kind);
  const int index_bits = bit_width(index_kind);
  const std::uint64_t body = checked_add(
      checked_mul(blocks, static_cast<std::uint64_t>(float_bits)),
      checked_mul(checked_mul(blocks, mask.kept_count()),
                  static_cast<std::uint64_t>(index_bits)));
  if (body > in.remaining()) {
    throw Error(ErrorCode::kTruncatedStream, "truncated stream while reading body");
  }
  // Anything beyond the final byte means the header described a different
  // array; with a zero-word shape terminator that happens when a zero extent
  // sits inside the shape and ends it early.
  if (in.remaining() - body >= 8) {
    throw Error(ErrorCode::kZeroExtent,
                "stream is longer than its header implies (zero extent inside "
                "the shape?)");
  }

  CodecSettings settings{block_shape, float_kind, index_kind,
                         static_cast<TransformFamily>(family), std::move(mask)};
  std::vector<double> maxima(blocks);
  for (auto& n : maxima) n = decode_bits(float_kind, in.get(float_bits, "maxima"));
  std::vector<std::int64_t> indices(blocks * settings.mask.kept_count());
  for (auto& f : indices) f = sign_extend(in.get(index_bits, "indices"), index_bits);
  return CompressedArray(std::move(shape), std::move(settings), std::move(maxima),
                         std::move(indices));
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace blaz
