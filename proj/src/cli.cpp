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

#include "blaz/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "blaz/array_file.hpp"
#include "blaz/error.hpp"
#include "blaz/format.hpp"
#include "blaz/metrics.hpp"
#include "blaz/ops.hpp"

namespace blaz::cli {

namespace {

struct SettingsFlags {
  std::string block;
  std::string float_kind = "f32";
  std::string index_kind = "i16";
  std::string transform = "dct";
  std::string mask = "full";

  void attach(CLI::App* app, bool block_required) {
    auto* opt = app->add_option("--block", block, "block shape, e.g. 4,4,4");
    if (block_required) opt->required();
    app->add_option("--float", float_kind, "bf16, f16, f32 or f64")->capture_default_str();
    app->add_option("--index", index_kind, "i8, i16, i32 or i64")->capture_default_str();
    app->add_option("--transform", transform, "dct or haar")->capture_default_str();
    app->add_option("--mask", mask, "full, none, first:K or a 0/1 file")
        ->capture_default_str();
  }

  CodecSettings build(std::size_t rank) const {
    if (block.empty()) {
      throw Error(ErrorCode::kInvalidParameter, "--block is required for raw inputs");
    }
    const auto fk = parse_float_kind(float_kind);
    if (!fk) throw Error(ErrorCode::kInvalidTypeCode, "unknown float kind " + float_kind);
    const auto ik = parse_index_kind(index_kind);
    if (!ik) throw Error(ErrorCode::kInvalidTypeCode, "unknown index kind " + index_kind);
    const auto tf = parse_transform(transform);
    if (!tf) throw Error(ErrorCode::kInvalidTypeCode, "unknown transform " + transform);
    Shape block_shape = parse_shape(block);
    for (std::size_t e : block_shape.dims()) {
      if (!is_power_of_two(e)) {
        throw Error(ErrorCode::kNonPowerOfTwoBlock,
                    "block extents must be powers of two, got " + block_shape.to_string());
      }
    }
    CodecSettings s{block_shape, *fk, *ik, *tf, parse_mask(mask, block_shape)};
    s.validate(rank);
    return s;
  }
};

struct OpFlags {
  double scalar = 1.0;
  double order = 1.0;
  double data_range = 1.0;
  std::optional<double> luminance_stabilizer;
  std::optional<double> contrast_stabilizer;
  double luminance_weight = 1.0;
  double contrast_weight = 1.0;
  double structure_weight = 1.0;
  std::string padding = "included";

  void attach(CLI::App* app) {
    app->add_option("--scalar,-x", scalar, "scalar for add_scalar / mul_scalar");
    app->add_option("--order,-p", order, "Wasserstein order (>= 1)")
        ->check(CLI::Range(1.0, std::numeric_limits<double>::max()));
    app->add_option("--data-range", data_range, "SSIM data range L");
    app->add_option("--sl", luminance_stabilizer, "SSIM luminance stabilizer");
    app->add_option("--sc", contrast_stabilizer, "SSIM contrast stabilizer");
    app->add_option("--wl", luminance_weight, "SSIM luminance weight");
    app->add_option("--wc", contrast_weight, "SSIM contrast weight");
    app->add_option("--ws", structure_weight, "SSIM structure weight");
    app->add_option("--padding", padding, "included or corrected")
        ->check(CLI::IsMember({"included", "corrected"}));
  }

  OracleParams build() const {
    OracleParams p;
    p.scalar = scalar;
    p.wasserstein.order = order;
    p.ssim = ops::SsimParams::for_range(data_range);
    if (luminance_stabilizer) p.ssim.luminance_stabilizer = *luminance_stabilizer;
    if (contrast_stabilizer) p.ssim.contrast_stabilizer = *contrast_stabilizer;
    p.ssim.luminance_weight = luminance_weight;
    p.ssim.contrast_weight = contrast_weight;
    p.ssim.structure_weight = structure_weight;
    p.padding = padding == "corrected" ? ops::Padding::kCorrected : ops::Padding::kIncluded;
    return p;
  }
};

CompressedArray read_compressed(const std::string& path) {
  return deserialize(read_file(path));
}

void write_compressed(const std::string& path, const CompressedArray& a) {
  write_file(path, serialize(a));
}

// Loads a snapshot that is either a raw array (compressed with `settings`)
// or a .bzc stream.
CompressedArray load_snapshot(const std::string& path, const SettingsFlags& settings) {
  const auto bytes = read_file(path);
  if (has_array_magic(bytes)) {
    const DenseArray a = decode_array(bytes);
    return compress(a, settings.build(a.shape().rank()));
  }
  return deserialize(bytes);
}

std::vector<std::string> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest " + path);
  const auto base = std::filesystem::path(path).parent_path();
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::filesystem::path p(line.substr(first, last - first + 1));
    entries.push_back((p.is_absolute() ? p : base / p).string());
  }
  return entries;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw Error(ErrorCode::kInvalidParameter, "invalid number '" + item + "'");
    }
    values.push_back(v);
  }
  return values;
}

DenseArray generate(const std::string& pattern, const Shape& shape, double value,
                    std::uint64_t seed, FloatKind kind) {
  if (pattern == "gradient") return gradient_array(shape, kind);
  if (pattern == "constant") return DenseArray::filled(shape, value, kind);
  if (pattern == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> values(shape.element_count());
    for (auto& v : values) v = dist(rng);
    return DenseArray(shape, kind, std::move(values));
  }
  throw Error(ErrorCode::kInvalidParameter, "unknown pattern " + pattern);
}

}  // namespace

Shape parse_shape(const std::string& text) {
  std::vector<std::size_t> dims;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || item[0] == '-') {
      throw Error(ErrorCode::kInvalidShape, "invalid extent '" + item + "' in " + text);
    }
    dims.push_back(static_cast<std::size_t>(v));
  }
  return Shape(std::move(dims));
}

PruningMask parse_mask(const std::string& spec, const Shape& block_shape) {
  if (spec == "full") return PruningMask::full(block_shape);
  if (spec == "none") return PruningMask::none(block_shape);
  if (spec.rfind("first:", 0) == 0) {
    const std::string count = spec.substr(6);
    std::size_t used = 0;
    unsigned long long k = 0;
    try {
      k = std::stoull(count, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != count.size()) {
      throw Error(ErrorCode::kInvalidParameter, "invalid mask " + spec);
    }
    return PruningMask::first(block_shape, static_cast<std::size_t>(k));
  }
  std::ifstream in(spec);
  if (!in) throw Error(ErrorCode::kIo, "cannot open mask file " + spec);
  std::vector<bool> bits;
  char c = 0;
  while (in.get(c)) {
    if (c == '0' || c == '1') bits.push_back(c == '1');
  }
  return PruningMask(block_shape, std::move(bits));
}

std::vector<std::vector<double>> timeseries_distances(
    std::span<const CompressedArray> snapshots, Measure measure,
    std::span<const double> orders) {
  if (snapshots.size() < 2) {
    throw Error(ErrorCode::kInvalidParameter, "need at least two snapshots");
  }
  for (const auto& s : snapshots) {
    if (!(s.original_shape() == snapshots[0].original_shape())) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "snapshot shapes differ: " + s.original_shape().to_string() + " vs " +
                      snapshots[0].original_shape().to_string());
    }
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t t = 0; t + 1 < snapshots.size(); ++t) {
    const auto& a = snapshots[t];
    const auto& b = snapshots[t + 1];
    std::vector<double> row;
    if (measure == Measure::kL2) {
      row.push_back(ops::l2_norm(ops::add(a, ops::negate(b))));
    } else {
      for (double p : orders) {
        ops::WassersteinParams params;
        params.order = p;
        row.push_back(ops::approx_wasserstein(a, b, params));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"blaz: lossy array compression with compressed-space operations"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic array file");
  std::string gen_pattern, gen_shape, gen_out, gen_kind = "f64";
  double gen_value = 0.0;
  std::uint64_t gen_seed = 0;
  gen->add_option("pattern", gen_pattern, "gradient, constant or random")->required();
  gen->add_option("--shape", gen_shape, "array shape, e.g. 16,16,16")->required();
  gen->add_option("--value", gen_value, "fill value for constant arrays");
  gen->add_option("--seed", gen_seed, "seed for random arrays");
  gen->add_option("--kind", gen_kind, "element kind")->capture_default_str();
  gen->add_option("-o,--output", gen_out, "output .bza path")->required();

  // compress
  auto* comp = app.add_subcommand("compress", "compress an array file to .bzc");
  std::string comp_in, comp_out;
  SettingsFlags comp_settings;
  comp->add_option("input", comp_in, "input .bza")->required();
  comp->add_option("-o,--output", comp_out, "output .bzc")->required();
  comp_settings.attach(comp, true);

  // decompress
  auto* decomp = app.add_subcommand("decompress", "decompress .bzc to an f64 array file");
  std::string decomp_in, decomp_out;
  decomp->add_option("input", decomp_in, "input .bzc")->required();
  decomp->add_option("-o,--output", decomp_out, "output .bza")->required();

  // op
  auto* op = app.add_subcommand("op", "run a compressed-space operation");
  std::string op_name, op_out;
  std::vector<std::string> op_operands;
  OpFlags op_flags;
  op->add_option("name", op_name, "operation name")->required();
  op->add_option("operands", op_operands, "operand .bzc files")->required();
  op->add_option("-o,--output", op_out, "output .bzc for array results");
  op_flags.attach(op);

  // compare
  auto* cmp = app.add_subcommand("compare", "compare an operation against its oracle");
  std::string cmp_name, cmp_format = "table";
  std::vector<std::string> cmp_inputs;
  SettingsFlags cmp_settings;
  OpFlags cmp_flags;
  cmp->add_option("name", cmp_name, "operation name")->required();
  cmp->add_option("inputs", cmp_inputs, "uncompressed .bza operands")->required();
  cmp->add_option("--format", cmp_format, "table or kv")
      ->check(CLI::IsMember({"table", "kv"}));
  cmp_settings.attach(cmp, true);
  cmp_flags.attach(cmp);

  // timeseries-diff
  auto* ts = app.add_subcommand("timeseries-diff", "distances between adjacent snapshots");
  std::string ts_manifest, ts_measure = "l2", ts_orders = "1";
  SettingsFlags ts_settings;
  ts->add_option("manifest", ts_manifest, "file listing snapshot paths")->required();
  ts->add_option("--measure", ts_measure, "l2 or wasserstein")
      ->check(CLI::IsMember({"l2", "wasserstein"}));
  ts->add_option("--orders,-p", ts_orders, "comma-separated Wasserstein orders");
  ts_settings.attach(ts, false);

  // info
  auto* info = app.add_subcommand("info", "print the layout and ratio of a .bzc");
  std::string info_in;
  int info_bits = 64;
  info->add_option("input", info_in, "input .bzc")->required();
  info->add_option("--input-bits", info_bits, "bits per uncompressed element")
      ->check(CLI::IsMember({16, 32, 64}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen) {
      const auto kind = parse_float_kind(gen_kind);
      if (!kind) throw Error(ErrorCode::kInvalidTypeCode, "unknown kind " + gen_kind);
      write_array(gen_out,
                  generate(gen_pattern, parse_shape(gen_shape), gen_value, gen_seed, *kind));
    } else if (*comp) {
      const DenseArray a = read_array(comp_in);
      const CompressedArray c = compress(a, comp_settings.build(a.shape().rank()));
      write_compressed(comp_out, c);
      out << to_key_values(ratio_report(c, bit_width(a.kind())));
    } else if (*decomp) {
      write_array(decomp_out, decompress(read_compressed(decomp_in)));
    } else if (*op) {
      std::vector<CompressedArray> operands;
      for (const auto& p : op_operands) operands.push_back(read_compressed(p));
      const OracleParams params = op_flags.build();
      const std::string& name = op_name;
      const std::size_t needed = operand_count(name);
      if (operands.size() != needed) {
        throw Error(ErrorCode::kInvalidParameter,
                    name + " takes " + std::to_string(needed) + " operand(s)");
      }
      std::optional<CompressedArray> array;
      std::optional<double> scalar;
      const auto& a = operands[0];
      if (name == "negate") array = ops::negate(a);
      else if (name == "add") array = ops::add(a, operands[1]);
      else if (name == "add_scalar") array = ops::add_scalar(a, params.scalar);
      else if (name == "mul_scalar") array = ops::mul_scalar(a, params.scalar);
      else if (name == "dot") scalar = ops::dot(a, operands[1]);
      else if (name == "mean") scalar = ops::mean(a, params.padding);
      else if (name == "covariance") scalar = ops::covariance(a, operands[1], params.padding);
      else if (name == "variance") scalar = ops::variance(a, params.padding);
      else if (name == "l2_norm") scalar = ops::l2_norm(a);
      else if (name == "cosine_similarity") scalar = ops::cosine_similarity(a, operands[1]);
      else if (name == "ssim") scalar = ops::ssim(a, operands[1], params.ssim, params.padding);
      else scalar = ops::approx_wasserstein(a, operands[1], params.wasserstein);
      if (array) {
        if (op_out.empty()) {
          throw Error(ErrorCode::kInvalidParameter, name + " needs -o for its array result");
        }
        write_compressed(op_out, *array);
      } else {
        out << format_number(*scalar) << '\n';
      }
    } else if (*cmp) {
      std::vector<DenseArray> inputs;
      for (const auto& p : cmp_inputs) inputs.push_back(read_array(p));
      const OracleReport report = compare_against_oracle(
          cmp_name, inputs, cmp_settings.build(inputs.at(0).shape().rank()),
          cmp_flags.build());
      if (cmp_format == "kv") {
        out << to_key_values(report);
      } else {
        out << to_table(std::span<const OracleReport>(&report, 1));
      }
    } else if (*ts) {
      std::vector<CompressedArray> snapshots;
      for (const auto& p : read_manifest(ts_manifest)) {
        snapshots.push_back(load_snapshot(p, ts_settings));
      }
      const Measure measure = ts_measure == "l2" ? Measure::kL2 : Measure::kWasserstein;
      const std::vector<double> orders = parse_list(ts_orders);
      for (double p : orders) {
        if (!(p >= 1.0)) throw Error(ErrorCode::kInvalidParameter, "orders must be >= 1");
      }
      const auto rows = timeseries_distances(snapshots, measure, orders);
      out << "# from to";
      if (measure == Measure::kL2) {
        out << " l2";
      } else {
        for (double p : orders) out << " w" << format_number(p);
      }
      out << '\n';
      for (std::size_t t = 0; t < rows.size(); ++t) {
        out << t << ' ' << t + 1;
        for (double v : rows[t]) out << ' ' << format_number(v);
        out << '\n';
      }
    } else if (*info) {
      const CompressedArray c = read_compressed(info_in);
      out << "shape=" << c.original_shape().to_string() << '\n';
      for (const auto& f : layout_of(c).fields) {
        out << "field " << std::left << std::setw(12) << f.name << " offset="
            << f.bit_offset << " bits=" << f.bit_length << '\n';
      }
      out << to_key_values(ratio_report(c, info_bits));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace blaz::cli
