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

#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "blaz/array_file.hpp"
#include "blaz/cli.hpp"
#include "blaz/codec.hpp"
#include "blaz/format.hpp"
#include "blaz/metrics.hpp"
#include "blaz/ops.hpp"
#include "test_util.hpp"

namespace blaz {
namespace {

namespace fs = std::filesystem;

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result blaz(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("blaz_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string value_of(const std::string& kv, const std::string& key) {
  std::istringstream in(kv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

TEST_CASE("parsing helpers") {
  CHECK(cli::parse_shape("16,8,4") == Shape{16, 8, 4});
  CHECK_THROWS(cli::parse_shape("4,x"));
  CHECK_THROWS(cli::parse_shape(""));
  CHECK(cli::parse_mask("full", Shape{2, 2}).kept_count() == 4);
  CHECK(cli::parse_mask("none", Shape{2, 2}).kept_count() == 0);
  CHECK(cli::parse_mask("first:3", Shape{2, 2}).kept_count() == 3);
  CHECK_THROWS(cli::parse_mask("first:x", Shape{2, 2}));

  TempDir dir;
  {
    std::ofstream f(dir / "corner.mask");
    for (int x = 0; x < 8; ++x) {
      for (int y = 0; y < 8; ++y) f << ((x >= 2 && y >= 2) ? '0' : '1');
      f << '\n';
    }
  }
  CHECK(cli::parse_mask(dir / "corner.mask", Shape{8, 8}) ==
        PruningMask::drop_high_corner(Shape{8, 8}, Shape{6, 6}));
  CHECK_THROWS(cli::parse_mask(dir / "corner.mask", Shape{4, 4}));
}

TEST_CASE("compress and decompress") {
  TempDir dir;
  REQUIRE(blaz({"generate", "gradient", "--shape", "16,16,16", "-o", dir / "g.bza"}).status == 0);
  const Result r = blaz({"compress", dir / "g.bza", "-o", dir / "g.bzc", "--block", "4,4,4",
                         "--float", "f32", "--index", "i16"});
  REQUIRE(r.status == 0);
  CHECK(fs::exists(dir / "g.bzc"));
  const auto settings = CodecSettings::make(Shape{4, 4, 4}, FloatKind::kF32, IndexKind::kI16);
  CHECK(value_of(r.out, "closed_form_ratio") ==
        format_number(compression_ratio(64, settings, Shape{16, 16, 16})));

  REQUIRE(blaz({"decompress", dir / "g.bzc", "-o", dir / "back.bza"}).status == 0);
  const DenseArray back = read_array(dir / "back.bza");
  CHECK(back.shape() == Shape{16, 16, 16});
  CHECK(back.kind() == FloatKind::kF64);
  const DenseArray g = gradient_array(Shape{16, 16, 16});
  CHECK(testing::max_abs_diff(back.values(), g.values()) < 1e-3);

  const Result bad = blaz({"compress", dir / "g.bza", "-o", dir / "x.bzc", "--block", "3,4,4"});
  CHECK(bad.status != 0);
  CHECK(bad.err.find("block extents must be powers of two") != std::string::npos);
}

TEST_CASE("zero arrays round-trip byte for byte") {
  TempDir dir;
  write_array(dir / "z.bza", DenseArray::zeros(Shape{5, 7}));
  REQUIRE(blaz({"compress", dir / "z.bza", "-o", dir / "z.bzc", "--block", "4,4"}).status == 0);
  REQUIRE(blaz({"decompress", dir / "z.bzc", "-o", dir / "z2.bza"}).status == 0);
  CHECK(read_file(dir / "z.bza") == read_file(dir / "z2.bza"));
}

TEST_CASE("truncated input fails") {
  TempDir dir;
  write_array(dir / "a.bza", DenseArray::filled(Shape{8, 8}, 1.0));
  REQUIRE(blaz({"compress", dir / "a.bza", "-o", dir / "a.bzc", "--block", "4,4"}).status == 0);
  auto bytes = read_file(dir / "a.bzc");
  bytes.resize(bytes.size() / 2);
  write_file(dir / "t.bzc", bytes);
  const Result r = blaz({"decompress", dir / "t.bzc", "-o", dir / "t.bza"});
  CHECK(r.status != 0);
  CHECK(r.err.find("truncated stream") != std::string::npos);
}

TEST_CASE("operations") {
  TempDir dir;
  REQUIRE(blaz({"generate", "constant", "--shape", "8,8", "--value", "2", "-o", dir / "a.bza"}).status == 0);
  REQUIRE(blaz({"generate", "constant", "--shape", "8,8", "--value", "3", "-o", dir / "b.bza"}).status == 0);
  REQUIRE(blaz({"generate", "random", "--shape", "8,8", "--seed", "5", "-o", dir / "r.bza"}).status == 0);
  for (const char* n : {"a", "b", "r"}) {
    REQUIRE(blaz({"compress", dir / (std::string(n) + ".bza"), "-o",
                  dir / (std::string(n) + ".bzc"), "--block", "4,4"}).status == 0);
  }
  const Result dot = blaz({"op", "dot", dir / "a.bzc", dir / "b.bzc"});
  REQUIRE(dot.status == 0);
  CHECK(std::stod(dot.out) == doctest::Approx(384.0).epsilon(1e-9));

  REQUIRE(blaz({"op", "negate", dir / "r.bzc", "-o", dir / "n1.bzc"}).status == 0);
  REQUIRE(blaz({"op", "negate", dir / "n1.bzc", "-o", dir / "n2.bzc"}).status == 0);
  CHECK(read_file(dir / "n2.bzc") == read_file(dir / "r.bzc"));

  const Result w = blaz({"op", "wasserstein", dir / "a.bzc", dir / "r.bzc", "-p", "68"});
  CHECK(w.status == 0);
  CHECK_NOTHROW(std::stod(w.out));
  CHECK(blaz({"op", "wasserstein", dir / "a.bzc", dir / "r.bzc", "-p", "0.5"}).status != 0);
  CHECK(blaz({"op", "sqrt", dir / "a.bzc"}).status != 0);
  CHECK(blaz({"op", "dot", dir / "a.bzc"}).status != 0);
  CHECK(blaz({"op", "negate", dir / "a.bzc"}).status != 0);

  REQUIRE(blaz({"compress", dir / "b.bza", "-o", dir / "b8.bzc", "--block", "8,8"}).status == 0);
  const Result mismatch = blaz({"op", "add", dir / "a.bzc", dir / "b8.bzc", "-o", dir / "s.bzc"});
  CHECK(mismatch.status != 0);
  CHECK(mismatch.err.find("block") != std::string::npos);

  // Scalar output is reproducible to the last digit.
  CHECK(blaz({"op", "ssim", dir / "r.bzc", dir / "b.bzc"}).out ==
        blaz({"op", "ssim", dir / "r.bzc", dir / "b.bzc"}).out);
}

TEST_CASE("comparison reports") {
  TempDir dir;
  REQUIRE(blaz({"generate", "random", "--shape", "16,16", "--seed", "1", "-o", dir / "a.bza"}).status == 0);
  REQUIRE(blaz({"generate", "random", "--shape", "16,16", "--seed", "2", "-o", dir / "b.bza"}).status == 0);
  const std::vector<std::string> settings{"--block", "4,4", "--float", "f64", "--index", "i16",
                                          "--format", "kv"};
  auto compare = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "compare");
    args.insert(args.end(), settings.begin(), settings.end());
    return blaz(args);
  };
  const Result l2 = compare({"l2_norm", dir / "a.bza"});
  REQUIRE(l2.status == 0);
  CHECK(std::stod(value_of(l2.out, "rel_deviation")) < 1e-6);
  const Result add = compare({"add", dir / "a.bza", dir / "b.bza"});
  REQUIRE(add.status == 0);
  CHECK_FALSE(value_of(add.out, "bound").empty());
  CHECK(std::stod(value_of(add.out, "abs_deviation")) <= std::stod(value_of(add.out, "bound")));
  const Result neg = compare({"negate", dir / "a.bza"});
  CHECK(std::stod(value_of(neg.out, "abs_deviation")) == 0.0);
  const Result table = blaz({"compare", "dot", dir / "a.bza", dir / "b.bza", "--block", "4,4"});
  CHECK(table.status == 0);
  CHECK(table.out.find("dot") != std::string::npos);
}

TEST_CASE("timeseries differences") {
  TempDir dir;
  std::mt19937_64 rng(3);
  {
    std::ofstream manifest(dir / "series.txt");
    for (int t = 0; t < 5; ++t) {
      const double level = t < 3 ? 0.0 : 1.0;
      std::vector<double> v(4 * 4 * 4);
      std::normal_distribution<double> noise(0.0, 0.01);
      for (auto& x : v) x = level + noise(rng);
      write_array(dir / ("s" + std::to_string(t) + ".bza"),
                  DenseArray(Shape{4, 4, 4}, FloatKind::kF64, v));
      manifest << "s" << t << ".bza\n";
    }
  }
  const Result l2 = blaz({"timeseries-diff", dir / "series.txt", "--block", "2,2,2"});
  REQUIRE(l2.status == 0);
  std::istringstream in(l2.out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "# from to l2");
  int from, to, best = -1;
  double value, top = -1.0;
  while (in >> from >> to >> value) {
    CHECK(to == from + 1);
    if (value > top) {
      top = value;
      best = from;
    }
  }
  CHECK(best == 2);

  const Result w = blaz({"timeseries-diff", dir / "series.txt", "--block", "2,2,2", "--measure",
                         "wasserstein", "-p", "1,2"});
  REQUIRE(w.status == 0);
  CHECK(w.out.rfind("# from to w1 w2\n", 0) == 0);

  {
    std::ofstream same(dir / "same.txt");
    same << "s0.bza\ns0.bza\n";
  }
  const Result zero = blaz({"timeseries-diff", dir / "same.txt", "--measure", "wasserstein",
                            "--block", "2,2,2"});
  CHECK(zero.out == "# from to w1\n0 1 0\n");

  write_array(dir / "odd.bza", DenseArray::zeros(Shape{4, 4, 2}));
  {
    std::ofstream bad(dir / "bad.txt");
    bad << "s0.bza\nodd.bza\n";
  }
  CHECK(blaz({"timeseries-diff", dir / "bad.txt", "--block", "2,2,2"}).status != 0);
  {
    std::ofstream one(dir / "one.txt");
    one << "s0.bza\n";
  }
  CHECK(blaz({"timeseries-diff", dir / "one.txt", "--block", "2,2,2"}).status != 0);
}

TEST_CASE("info prints the layout") {
  TempDir dir;
  write_array(dir / "a.bza", DenseArray::zeros(Shape{8, 8}));
  REQUIRE(blaz({"compress", dir / "a.bza", "-o", dir / "a.bzc", "--block", "4,4"}).status == 0);
  const Result r = blaz({"info", dir / "a.bzc"});
  REQUIRE(r.status == 0);
  CHECK(r.out.find("shape=") != std::string::npos);
  CHECK(r.out.find("indices") != std::string::npos);
  CHECK_FALSE(value_of(r.out, "closed_form_ratio").empty());
}

TEST_CASE("usage errors return nonzero") {
  CHECK(blaz({}).status != 0);
  CHECK(blaz({"frobnicate"}).status != 0);
  CHECK(blaz({"--help"}).status == 0);
}

}  // namespace
}  // namespace blaz
