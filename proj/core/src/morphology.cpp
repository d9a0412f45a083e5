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

#include "fpbin/morphology.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace fpbin::morphology {

namespace {

// Offsets of P2..P9 (dx, dy), clockwise from north.
constexpr int kDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

constexpr bool p(NeighborCode code, int k) { return (code >> (k - 2)) & 1u; }

}  // namespace

NeighborCode neighborhood_code(const BinaryImage& img, int x, int y) {
  unsigned code = 0;
  for (int i = 0; i < 8; ++i) {
    if (img.get_or_zero(x + kDx[i], y + kDy[i])) code |= 1u << i;
  }
  return static_cast<NeighborCode>(code);
}

int neighbor_transitions(NeighborCode code) {
  int count = 0;
  for (int i = 0; i < 8; ++i) {
    const bool here = (code >> i) & 1u;
    const bool next = (code >> ((i + 1) % 8)) & 1u;
    if (!here && next) ++count;
  }
  return count;
}

int neighbor_sum(NeighborCode code) { return std::popcount(static_cast<unsigned>(code)); }

bool deletable(NeighborCode code, Phase phase, int min_neighbors) {
  const int b = neighbor_sum(code);
  if (b < min_neighbors || b > 6) return false;
  if (neighbor_transitions(code) != 1) return false;
  if (phase == Phase::first) {
    return !(p(code, 2) && p(code, 4) && p(code, 6)) && !(p(code, 4) && p(code, 6) && p(code, 8));
  }
  return !(p(code, 2) && p(code, 4) && p(code, 8)) && !(p(code, 2) && p(code, 6) && p(code, 8));
}

ThinningLUT build_lut(int min_neighbors) {
  if (min_neighbors < 0 || min_neighbors > 6) {
    throw ConfigError("minimum neighbour count must be in [0, 6], got " + std::to_string(min_neighbors));
  }
  ThinningLUT lut;
  for (unsigned code = 0; code < 256; ++code) {
    lut.phase1[code] = deletable(static_cast<NeighborCode>(code), Phase::first, min_neighbors);
    lut.phase2[code] = deletable(static_cast<NeighborCode>(code), Phase::second, min_neighbors);
  }
  return lut;
}

const ThinningLUT& default_lut() {
  static const ThinningLUT lut = build_lut();
  return lut;
}

PassResult thin_pass(const BinaryImage& img, Phase phase, const ThinningLUT& lut) {
  const int w = img.width();
  const int h = img.height();
  PassResult result{img, 0};
  const std::vector<std::uint8_t> zeros(static_cast<std::size_t>(w) + 2, 0);

  // Zero-padded copies of three consecutive input rows: index x+1 holds column x.
  std::vector<std::uint8_t> above(zeros), here(zeros), below(zeros);
  auto load = [&](std::vector<std::uint8_t>& dst, int y) {
    if (y < 0 || y >= h) {
      std::fill(dst.begin(), dst.end(), 0);
      return;
    }
    auto src = img.row(y);
    std::copy(src.begin(), src.end(), dst.begin() + 1);
  };
  load(here, 0);
  load(below, 1);

  const auto& table = phase == Phase::first ? lut.phase1 : lut.phase2;
  for (int y = 0; y < h; ++y) {
    auto out = result.image.row(y);
    for (int x = 0; x < w; ++x) {
      const auto c = static_cast<std::size_t>(x) + 1;
      if (!here[c]) continue;
      const unsigned code = above[c] | (above[c + 1] << 1) | (here[c + 1] << 2) | (below[c + 1] << 3) |
                            (below[c] << 4) | (below[c - 1] << 5) | (here[c - 1] << 6) |
                            (above[c - 1] << 7);
      if (table[code]) {
        out[x] = 0;
        ++result.changed;
      }
    }
    std::swap(above, here);
    std::swap(here, below);
    load(below, y + 2);
  }
  return result;
}

ThinningResult thin(const BinaryImage& img, int iterations, bool early_exit, const ThinningLUT& lut) {
  if (iterations < 0) throw ConfigError("iteration count must be non-negative");
  ThinningResult result{img, {}, 0};
  for (int i = 0; i < iterations; ++i) {
    auto first = thin_pass(result.image, Phase::first, lut);
    auto second = thin_pass(first.image, Phase::second, lut);
    result.image = std::move(second.image);
    result.changed_per_iteration.push_back(first.changed + second.changed);
    ++result.iterations_run;
    if (early_exit && result.changed_per_iteration.back() == 0) break;
  }
  return result;
}

std::vector<double> iteration_profile(const BinaryImage& img, int max_iter, const ThinningLUT& lut) {
  if (max_iter < 1) throw ConfigError("iteration profile needs at least one iteration");
  const auto run = thin(img, max_iter, false, lut);
  std::vector<double> series(run.changed_per_iteration.size(), 0.0);
  const auto first = run.changed_per_iteration.front();
  if (first == 0) return series;
  for (std::size_t i = 0; i < series.size(); ++i) {
    series[i] = static_cast<double>(run.changed_per_iteration[i]) / static_cast<double>(first);
  }
  return series;
}

BinaryImage dilate_2x2(const BinaryImage& img) {
  BinaryImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const bool v = img.at(x, y) || img.get_or_zero(x + 1, y) || img.get_or_zero(x, y + 1) ||
                     img.get_or_zero(x + 1, y + 1);
      out.set(x, y, v);
    }
  }
  return out;
}

}  // namespace fpbin::morphology
