/*
 * Copyright 2026 The fpbin Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "doctest.h"
#include "fpbin/binarize.hpp"
#include "fpbin/morphology.hpp"
#include "fpbin/pnm.hpp"
#include "support.hpp"

using namespace fpbin;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("fpbin-cli-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

GrayImage sample(int w, int h) {
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> n(-25, 25);
  GrayImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      img.at(x, y) = static_cast<std::uint8_t>(std::clamp(((x + y) / 5) % 2 ? 190 + n(rng) : 70 + n(rng), 0, 255));
  return img;
}

}  // namespace

TEST_CASE("usage errors exit 64") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"bogus"}).code == cli::kExitUsage);
  CHECK(run({"process"}).code == cli::kExitUsage);
  CHECK(run({"process", "x.pgm", "--polarity", "sideways"}).code == cli::kExitUsage);
  CHECK(run({"process", "x.pgm", "--factor-mode", "add"}).code == cli::kExitUsage);
  CHECK(run({"process", "x.pgm", "--iterations", "-1"}).code == cli::kExitUsage);
}

TEST_CASE("process") {
  TempDir dir;
  const auto img = sample(64, 48);
  const auto in = dir.file("in.pgm");
  write_file(in, save_pgm(img));

  SUBCASE("missing input writes nothing") {
    const auto r = run({"process", dir.file("nope.pgm"), "--out-thinned", dir.file("t.pbm")});
    CHECK(r.code == cli::kExitIo);
    CHECK_FALSE(fs::exists(dir.file("t.pbm")));
    CHECK_FALSE(fs::exists(dir.file("t.pbm.manifest.txt")));
  }

  SUBCASE("corrupt input is an I/O error") {
    write_file(dir.file("bad.pgm"), Bytes{'P', '5', '\n', '9'});
    CHECK(run({"process", dir.file("bad.pgm"), "--out-binarized", dir.file("b.pbm")}).code == cli::kExitIo);
    CHECK_FALSE(fs::exists(dir.file("b.pbm")));
  }

  SUBCASE("unwritable output leaves no partial files") {
    const auto r = run({"process", in, "--out-binarized", dir.file("b.pbm"), "--out-thinned",
                        dir.file("missing/dir/t.pbm")});
    CHECK(r.code == cli::kExitIo);
    CHECK_FALSE(fs::exists(dir.file("b.pbm")));
  }

  SUBCASE("outputs equal the library path") {
    const auto r = run({"process", in, "--out-binarized", dir.file("b.pbm"), "--out-dilated", dir.file("d.pbm"),
                        "--out-thinned", dir.file("t.pbm")});
    REQUIRE(r.code == cli::kExitOk);
    const auto grid = build_block_grid(64, 48, 16, 1);
    const auto b = binarize(img, threshold_map(img, grid));
    const auto d = morphology::dilate_2x2(b);
    const auto t = morphology::thin(d, 6).image;
    CHECK(load_pbm(read_file(dir.file("b.pbm"))) == b);
    CHECK(load_pbm(read_file(dir.file("d.pbm"))) == d);
    CHECK(load_pbm(read_file(dir.file("t.pbm"))) == t);
    CHECK(fs::exists(dir.file("b.pbm.manifest.txt")));
  }

  SUBCASE("zero iterations leave the dilated image") {
    REQUIRE(run({"process", in, "--iterations", "0", "--out-dilated", dir.file("d.pbm"), "--out-thinned",
                 dir.file("t.pbm")})
                .code == cli::kExitOk);
    CHECK(read_file(dir.file("d.pbm")) == read_file(dir.file("t.pbm")));
  }

  SUBCASE("reruns are byte-identical") {
    const std::vector<std::string> args{"process",     in,    "--out-thinned", dir.file("t.pbm"),
                                        "--manifest",  dir.file("m.txt"), "--polarity", "light",
                                        "--factor-mode", "div"};
    REQUIRE(run(args).code == cli::kExitOk);
    const auto first_t = read_file(dir.file("t.pbm"));
    const auto first_m = read_file(dir.file("m.txt"));
    REQUIRE(run(args).code == cli::kExitOk);
    CHECK(read_file(dir.file("t.pbm")) == first_t);
    CHECK(read_file(dir.file("m.txt")) == first_m);
    const std::string manifest(first_m.begin(), first_m.end());
    CHECK(manifest.find("polarity light") != std::string::npos);
    CHECK(manifest.find("factor_mode div") != std::string::npos);
    CHECK(manifest.find("thinning.deleted") != std::string::npos);
  }

  SUBCASE("manifest goes to stdout without outputs") {
    const auto r = run({"process", in});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.rfind("fpbin-manifest 1\n", 0) == 0);
  }

  SUBCASE("block larger than the image") {
    CHECK(run({"process", in, "--block-size", "128"}).code == cli::kExitUsage);
    CHECK(run({"process", in, "--overlap", "16"}).code == cli::kExitUsage);
  }
}

TEST_CASE("simulate") {
  TempDir dir;
  const auto in = dir.file("in.pgm");
  write_file(in, save_pgm(sample(128, 32)));

  const auto r = run({"simulate", in, "--row-width", "128", "--trace", dir.file("trace.txt")});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("row_load_clocks 32") != std::string::npos);
  CHECK(r.out.find("equivalence PASS") != std::string::npos);
  const auto trace = read_file(dir.file("trace.txt"));
  CHECK(std::string(trace.begin(), trace.end()).rfind("0 in load row=0 word=0\n", 0) == 0);

  CHECK(run({"simulate", in}).code == cli::kExitIo);
  CHECK(run({"simulate", in, "--row-width", "128", "--clock-mhz", "0"}).code == cli::kExitUsage);

  write_file(dir.file("wide.pgm"), save_pgm(sample(512, 16)));
  const auto full = run({"simulate", dir.file("wide.pgm"), "--clock-mhz", "79.4"});
  CHECK(full.code == cli::kExitOk);
  CHECK(full.out.find("input_bus_clocks 2048") != std::string::npos);
  CHECK(full.out.find("79.4") != std::string::npos);
}

TEST_CASE("blocksize") {
  TempDir dir;
  const auto in = dir.file("flat.pgm");
  write_file(in, save_pgm(GrayImage(64, 64, 90)));
  const auto r = run({"blocksize", in});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("selected 4\n") != std::string::npos);
  CHECK(r.err.find("256") != std::string::npos);

  const auto c = run({"blocksize", in, "--candidates", "8,32", "--factor-mode", "div"});
  CHECK(c.out.find("mode div") != std::string::npos);
  CHECK(c.out.find("selected 8\n") != std::string::npos);
  CHECK(run({"blocksize", in}).out == r.out);
}

TEST_CASE("metrics") {
  TempDir dir;
  const auto in = dir.file("in.pgm");
  write_file(in, save_pgm(sample(64, 64)));
  const auto r = run({"metrics", in, "--reference", "adaptive"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("16 1 inf 0.000000") != std::string::npos);

  write_file(dir.file("flat.pgm"), save_pgm(GrayImage(32, 32, 40)));
  const auto flat = run({"metrics", dir.file("flat.pgm")});
  CHECK(flat.code == cli::kExitOk);
  CHECK(flat.out.find("undefined") != std::string::npos);
}
