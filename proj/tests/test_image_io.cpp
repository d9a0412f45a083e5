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

#include <random>
#include <string>

#include "doctest.h"
#include "fpbin/image.hpp"
#include "fpbin/pnm.hpp"
#include "support.hpp"

using namespace fpbin;

namespace {

Bytes to_bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }

}  // namespace

TEST_CASE("load_pgm reads a small binary graymap") {
  auto bytes = to_bytes("P5\n2 2\n255\n");
  bytes.insert(bytes.end(), {0, 255, 10, 20});
  const auto img = load_pgm(bytes);
  CHECK(img.width() == 2);
  CHECK(img.height() == 2);
  CHECK(img.at(0, 0) == 0);
  CHECK(img.at(1, 0) == 255);
  CHECK(img.at(0, 1) == 10);
  CHECK(img.at(1, 1) == 20);
}

TEST_CASE("load_pgm accepts header comments") {
  auto bytes = to_bytes("P5 # scanner\n# size follows\n1 1\n255\n");
  bytes.push_back(42);
  CHECK(load_pgm(bytes).at(0, 0) == 42);
}

TEST_CASE("load_pgm errors name the field") {
  SUBCASE("16-bit maxval") {
    auto bytes = to_bytes("P5\n1 1\n65535\n");
    bytes.insert(bytes.end(), {0, 0});
    try {
      load_pgm(bytes);
      FAIL("expected DecodeError");
    } catch (const DecodeError& e) {
      CHECK(e.field() == "maxval");
      CHECK(std::string(e.what()).find("unsupported maxval") != std::string::npos);
    }
  }
  SUBCASE("truncated payload") {
    auto bytes = to_bytes("P5\n4 4\n255\n");
    bytes.insert(bytes.end(), 10, 7);
    try {
      load_pgm(bytes);
      FAIL("expected DecodeError");
    } catch (const DecodeError& e) {
      CHECK(e.field() == "payload");
    }
  }
  SUBCASE("wrong magic") {
    CHECK_THROWS_AS(load_pgm(to_bytes("P2\n1 1\n255\n0\n")), DecodeError);
    CHECK_THROWS_AS(load_pgm(to_bytes("GIF89a")), DecodeError);
    CHECK_THROWS_AS(load_pgm(Bytes{}), DecodeError);
  }
  SUBCASE("bad dimensions") {
    CHECK_THROWS_AS(load_pgm(to_bytes("P5\n0 1\n255\n")), DecodeError);
    CHECK_THROWS_AS(load_pgm(to_bytes("P5\nx 1\n255\n")), DecodeError);
  }
}

TEST_CASE("save_pgm writes the canonical header") {
  GrayImage one(1, 1);
  auto expect = to_bytes("P5\n1 1\n255\n");
  expect.push_back(0);
  CHECK(save_pgm(one) == expect);

  GrayImage two(2, 1);
  two.at(0, 0) = 7;
  two.at(1, 0) = 9;
  const auto out = save_pgm(two);
  REQUIRE(out.size() == 13);
  CHECK(out[11] == 0x07);
  CHECK(out[12] == 0x09);
}

TEST_CASE("pgm round trips") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dim(1, 40);
  for (int i = 0; i < 50; ++i) {
    const auto img = testing::random_gray(rng, dim(rng), dim(rng));
    const auto bytes = save_pgm(img);
    CHECK(load_pgm(bytes) == img);
    CHECK(save_pgm(load_pgm(bytes)) == bytes);
  }
}

TEST_CASE("pbm packs rows MSB first with zero padding") {
  BinaryImage eight(8, 1);
  eight.set(0, 0, true);
  eight.set(7, 0, true);
  auto out = save_pbm(eight);
  CHECK(out.back() == 0x81);

  BinaryImage three(3, 1, 1);
  out = save_pbm(three);
  CHECK(out == [] {
    auto b = to_bytes("P4\n3 1\n");
    b.push_back(0xE0);
    return b;
  }());
}

TEST_CASE("pbm round trips") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> dim(1, 37);
  for (int i = 0; i < 50; ++i) {
    const auto img = testing::random_binary(rng, dim(rng), dim(rng));
    CHECK(load_pbm(save_pbm(img)) == img);
  }
}

TEST_CASE("crop") {
  std::mt19937 rng(3);
  const auto img = testing::random_gray(rng, 20, 13);

  CHECK(crop(img, {0, 0, 20, 13}) == img);

  const auto px = crop(img, {4, 9, 1, 1});
  CHECK(px.width() == 1);
  CHECK(px.at(0, 0) == img.at(4, 9));

  // Crop of a crop is the crop at the summed offset.
  const auto outer = crop(img, {2, 1, 15, 10});
  CHECK(crop(outer, {3, 4, 5, 5}) == crop(img, {5, 5, 5, 5}));

  CHECK_THROWS_AS(crop(img, {16, 0, 5, 5}), ConfigError);
  CHECK_THROWS_AS(crop(img, {-1, 0, 5, 5}), ConfigError);
  CHECK_THROWS_AS(crop(img, {0, 0, 0, 5}), ConfigError);
}

TEST_CASE("image helpers") {
  CHECK_THROWS_AS(GrayImage(0, 3), ConfigError);

  BinaryImage img(3, 2);
  img.set(0, 0, true);
  img.set(2, 1, true);
  CHECK(img.popcount() == 2);
  CHECK(img.get_or_zero(-1, 0) == 0);
  CHECK(img.get_or_zero(3, 1) == 0);

  const auto c = complement(img);
  CHECK(c.popcount() == 4);
  CHECK(count_differences(img, c) == 6);

  const auto r = rotate180(img);
  CHECK(r.at(2, 1) == 1);
  CHECK(r.at(0, 0) == 1);
  img.set(1, 0, true);
  CHECK(rotate180(rotate180(img)) == img);
  CHECK(rotate180(img).at(1, 1) == 1);

  CHECK_THROWS_AS(count_differences(img, BinaryImage(2, 3)), DimensionError);
}
