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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "fpbin/morphology.hpp"
#include "support.hpp"

using namespace fpbin;
using namespace fpbin::morphology;

namespace {

// Neighbours P2..P9 read straight from the image, clockwise from north.
std::array<int, 8> ring(const BinaryImage& img, int x, int y) {
  return {img.get_or_zero(x, y - 1),     img.get_or_zero(x + 1, y - 1), img.get_or_zero(x + 1, y),
          img.get_or_zero(x + 1, y + 1), img.get_or_zero(x, y + 1),     img.get_or_zero(x - 1, y + 1),
          img.get_or_zero(x - 1, y),     img.get_or_zero(x - 1, y - 1)};
}

// Straight transcription of the deletion conditions on a P2..P9 ring.
bool raw_condition(const std::array<int, 8>& p, bool first_phase, int min_b = 3) {
  int b = 0, a = 0;
  for (int i = 0; i < 8; ++i) {
    b += p[i];
    if (p[i] == 0 && p[(i + 1) % 8] == 1) ++a;
  }
  const int P2 = p[0], P4 = p[2], P6 = p[4], P8 = p[6];
  if (b < min_b || b > 6 || a != 1) return false;
  if (first_phase) return (P2 * P4 * P6) == 0 && (P4 * P6 * P8) == 0;
  return (P2 * P4 * P8) == 0 && (P2 * P6 * P8) == 0;
}

std::array<int, 8> ring_of(NeighborCode c) {
  std::array<int, 8> p{};
  for (int i = 0; i < 8; ++i) p[i] = (c >> i) & 1;
  return p;
}

BinaryImage naive_pass(const BinaryImage& in, bool first_phase) {
  BinaryImage out = in;
  for (int y = 0; y < in.height(); ++y)
    for (int x = 0; x < in.width(); ++x)
      if (in.at(x, y) && raw_condition(ring(in, x, y), first_phase)) out.set(x, y, false);
  return out;
}

BinaryImage naive_thin(BinaryImage img, int iterations) {
  for (int i = 0; i < iterations; ++i) img = naive_pass(naive_pass(img, true), false);
  return img;
}

int row_width(const BinaryImage& img, int y) {
  int n = 0;
  for (int x = 0; x < img.width(); ++x) n += img.at(x, y);
  return n;
}

}  // namespace

TEST_CASE("neighbour transitions and sums") {
  CHECK(neighbor_transitions(0) == 0);
  CHECK(neighbor_transitions(0b00000001) == 1);
  CHECK(neighbor_transitions(0b01010101) == 4);
  CHECK(neighbor_transitions(0xFF) == 0);
  CHECK(neighbor_sum(0) == 0);
  CHECK(neighbor_sum(255) == 8);
  for (int c = 0; c < 256; ++c) {
    int bits = 0, a = 0;
    for (int i = 0; i < 8; ++i) {
      bits += (c >> i) & 1;
      if (!((c >> i) & 1) && ((c >> ((i + 1) % 8)) & 1)) ++a;
    }
    CHECK(neighbor_sum(static_cast<NeighborCode>(c)) == bits);
    CHECK(neighbor_transitions(static_cast<NeighborCode>(c)) == a);
  }
}

TEST_CASE("neighborhood_code reads clockwise from north") {
  BinaryImage img(3, 3);
  img.set(1, 0, true);  // P2
  img.set(2, 1, true);  // P4
  img.set(0, 2, true);  // P7
  CHECK(neighborhood_code(img, 1, 1) == 0b00100101);
  CHECK(neighborhood_code(img, 0, 0) == 0b00000100);
}

TEST_CASE("deletable examples") {
  CHECK(deletable(0b00001111, Phase::first));
  // P2..P6 set, P7..P9 clear.
  CHECK_FALSE(deletable(0b00011111, Phase::first));
  CHECK_FALSE(deletable(0, Phase::first));
  CHECK_FALSE(deletable(0, Phase::second));
  // Two-neighbour end point: kept by default, deleted by the classic bound.
  CHECK_FALSE(deletable(0b00000011, Phase::first));
  CHECK(deletable(0b00000011, Phase::first, 2));
}

TEST_CASE("deletion tables") {
  const auto& lut = default_lut();
  CHECK(std::count(lut.phase1.begin(), lut.phase1.end(), true) == 26);
  CHECK(std::count(lut.phase2.begin(), lut.phase2.end(), true) == 26);
  CHECK(build_lut() == lut);

  for (int c = 0; c < 256; ++c) {
    const auto code = static_cast<NeighborCode>(c);
    CHECK(lut.phase1[code] == raw_condition(ring_of(code), true));
    CHECK(lut.phase2[code] == raw_condition(ring_of(code), false));
    CHECK(lut.phase2[code] == lut.phase1[rotate_code_180(code)]);
    if (neighbor_transitions(code) == 1 && (neighbor_sum(code) == 3 || neighbor_sum(code) == 4))
      CHECK(lut.phase1[code]);
  }

  const auto classic = build_lut(2);
  CHECK(std::count(classic.phase1.begin(), classic.phase1.end(), true) == 34);
  CHECK_THROWS_AS(build_lut(7), ConfigError);
  CHECK_THROWS_AS(build_lut(-1), ConfigError);
}

TEST_CASE("thin_pass basics") {
  BinaryImage zero(10, 10);
  auto r = thin_pass(zero, Phase::first);
  CHECK(r.changed == 0);
  CHECK(r.image == zero);

  BinaryImage dot(5, 5);
  dot.set(2, 2, true);
  CHECK(thin_pass(dot, Phase::first).image == dot);
  CHECK(thin_pass(dot, Phase::second).changed == 0);
}

TEST_CASE("thin_pass matches the naive two-buffer pass") {
  std::mt19937 rng(21);
  for (int i = 0; i < 60; ++i) {
    const auto img = testing::random_binary(rng, 1 + i % 23, 1 + (i * 7) % 19, 0.3 + 0.01 * i);
    for (auto phase : {Phase::first, Phase::second}) {
      const auto got = thin_pass(img, phase);
      const auto want = naive_pass(img, phase == Phase::first);
      REQUIRE(got.image == want);
      CHECK(got.changed == img.popcount() - want.popcount());
    }
  }
}

TEST_CASE("thin") {
  std::mt19937 rng(22);
  const auto img = testing::random_binary(rng, 30, 30, 0.6);
  CHECK(thin(img, 0).image == img);
  CHECK(thin(img, 0).iterations_run == 0);

  const auto t = thin(img, 6);
  CHECK(t.image == naive_thin(img, 6));
  CHECK(t.iterations_run == 6);
  REQUIRE(t.changed_per_iteration.size() == 6);

  const auto e = thin(img, 100, true);
  CHECK(e.changed_per_iteration.back() == 0);
  CHECK(e.iterations_run < 100);
  CHECK(thin(e.image, 3).image == e.image);
}

TEST_CASE("bars thin to a single pixel") {
  const auto bar3 = testing::bar_image(3, 12);
  const auto t3 = thin(bar3, 6).image;
  for (int y = 7; y < 15; ++y) CHECK(row_width(t3, y) == 1);

  for (int w = 1; w <= 13; ++w) {
    const auto bar = testing::bar_image(w, 30);
    const auto t = thin(bar, 6).image;
    for (int y = 12; y < 28; ++y) CHECK(row_width(t, y) == 1);
    const auto p = thin(bar, 12).changed_per_iteration;
    for (std::size_t i = 6; i < p.size(); ++i) CHECK(p[i] * 100 < p[0] + (p[0] == 0));
  }
}

TEST_CASE("thinning properties over random images") {
  std::mt19937 rng(23);
  for (int i = 0; i < 40; ++i) {
    const auto img = testing::random_binary(rng, 24, 24, 0.35 + 0.01 * i);
    BinaryImage cur = img;
    bool reached = false;
    for (int k = 0; k < 60 && !reached; ++k) {
      const auto a = thin_pass(cur, Phase::first);
      REQUIRE(testing::subset_of(a.image, cur));
      const auto b = thin_pass(a.image, Phase::second);
      REQUIRE(testing::subset_of(b.image, a.image));
      reached = a.changed == 0 && b.changed == 0;
      cur = b.image;
    }
    REQUIRE(reached);
    CHECK(thin_pass(cur, Phase::first).changed == 0);
    CHECK(thin_pass(cur, Phase::second).changed == 0);

    // Phase II on the rotated image is phase I rotated back.
    CHECK(thin_pass(rotate180(img), Phase::second).image == rotate180(thin_pass(img, Phase::first).image));
  }
}

TEST_CASE("iteration_profile") {
  BinaryImage thin_line(20, 5);
  for (int x = 2; x < 18; ++x) thin_line.set(x, 2, true);
  const auto zeros = iteration_profile(thin_line, 4);
  REQUIRE(zeros.size() == 4);
  for (double v : zeros) CHECK(v == 0.0);

  const auto p = iteration_profile(testing::bar_image(9, 30), 8);
  CHECK(p[0] == 1.0);
  CHECK(p.back() < 0.01);
}

TEST_CASE("dilate_2x2") {
  BinaryImage zero(8, 8);
  CHECK(dilate_2x2(zero) == zero);

  BinaryImage dot(10, 10);
  dot.set(5, 5, true);
  const auto d = dilate_2x2(dot);
  CHECK(d.popcount() == 4);
  CHECK(d.at(4, 4));
  CHECK(d.at(4, 5));
  CHECK(d.at(5, 4));
  CHECK(d.at(5, 5));

  std::mt19937 rng(24);
  for (int i = 0; i < 20; ++i) {
    const auto img = testing::random_binary(rng, 15, 11, 0.2);
    const auto out = dilate_2x2(img);
    CHECK(testing::subset_of(img, out));
    for (int y = 0; y < 11; ++y)
      for (int x = 0; x < 15; ++x) {
        const bool want = img.get_or_zero(x, y) || img.get_or_zero(x + 1, y) ||
                          img.get_or_zero(x, y + 1) || img.get_or_zero(x + 1, y + 1);
        REQUIRE(out.at(x, y) == want);
      }
  }
}
