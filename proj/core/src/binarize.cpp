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

#include "fpbin/binarize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fpbin {

std::vector<int> block_origins(int extent, int block_size, int overlap) {
  const int stride = block_size - overlap;
  std::vector<int> origins;
  for (int o = 0; o + block_size <= extent; o += stride) origins.push_back(o);
  if (origins.back() + block_size < extent) origins.push_back(extent - block_size);
  return origins;
}

namespace {

std::vector<int> owners(const std::vector<int>& origins, int extent, int block_size) {
  std::vector<int> owner(static_cast<std::size_t>(extent), -1);
  for (std::size_t i = origins.size(); i-- > 0;) {
    for (int p = origins[i]; p < origins[i] + block_size; ++p) owner[static_cast<std::size_t>(p)] = static_cast<int>(i);
  }
  return owner;
}

void require_same_size(const BinaryImage& g, const BinaryImage& f) {
  if (g.width() != f.width() || g.height() != f.height()) {
    throw DimensionError("images differ in size: " + std::to_string(g.width()) + "x" +
                         std::to_string(g.height()) + " vs " + std::to_string(f.width()) + "x" +
                         std::to_string(f.height()));
  }
}

}  // namespace

BlockGrid::BlockGrid(int width, int height, int block_size, int overlap)
    : width_(width), height_(height), block_size_(block_size), overlap_(overlap) {
  if (block_size < 2) throw ConfigError("block size must be at least 2");
  if (overlap < 0 || overlap >= block_size) throw ConfigError("overlap must be in [0, block size)");
  if (width < block_size || height < block_size) {
    throw ConfigError("image " + std::to_string(width) + "x" + std::to_string(height) +
                      " is smaller than block size " + std::to_string(block_size));
  }
  x_origins_ = block_origins(width, block_size, overlap);
  y_origins_ = block_origins(height, block_size, overlap);
  x_owner_ = owners(x_origins_, width, block_size);
  y_owner_ = owners(y_origins_, height, block_size);
}

Rect BlockGrid::block(std::size_t index) const {
  const auto cols = x_origins_.size();
  return {x_origins_[index % cols], y_origins_[index / cols], block_size_, block_size_};
}

std::vector<Rect> BlockGrid::blocks() const {
  std::vector<Rect> out;
  out.reserve(block_count());
  for (std::size_t i = 0; i < block_count(); ++i) out.push_back(block(i));
  return out;
}

BlockGrid build_block_grid(int width, int height, int block_size, int overlap) {
  return BlockGrid(width, height, block_size, overlap);
}

std::uint8_t block_mean_threshold(const GrayImage& img, const Rect& block) {
  if (block.w <= 0 || block.h <= 0) throw ConfigError("empty block");
  if (!img.contains(block)) throw ConfigError("block lies outside the image");
  std::uint64_t sum = 0;
  for (int y = block.y0; y < block.y0 + block.h; ++y) {
    for (int x = block.x0; x < block.x0 + block.w; ++x) sum += img.at(x, y);
  }
  return static_cast<std::uint8_t>(sum / (static_cast<std::uint64_t>(block.w) * block.h));
}

ThresholdMap threshold_map(const GrayImage& img, const BlockGrid& grid) {
  if (img.width() != grid.width() || img.height() != grid.height()) {
    throw DimensionError("block grid was built for a different image size");
  }
  ThresholdMap map{grid, {}};
  map.thresholds.reserve(grid.block_count());
  for (std::size_t i = 0; i < grid.block_count(); ++i) {
    map.thresholds.push_back(block_mean_threshold(img, grid.block(i)));
  }
  return map;
}

BinaryImage binarize(const GrayImage& img, const ThresholdMap& tmap, Polarity polarity) {
  if (img.width() != tmap.grid.width() || img.height() != tmap.grid.height()) {
    throw DimensionError("threshold map does not cover the image");
  }
  BinaryImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const bool above = img.at(x, y) > tmap.threshold_for(x, y);
      out.set(x, y, polarity == Polarity::light_foreground ? above : !above);
    }
  }
  return out;
}

BinaryImage binarize_global(const GrayImage& img, std::uint8_t threshold, Polarity polarity) {
  BinaryImage out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const bool above = src[i] > threshold;
    dst[i] = (polarity == Polarity::light_foreground ? above : !above) ? 1 : 0;
  }
  return out;
}

double optimal_threshold(const ClassStats& s) {
  if (s.mu1 == s.mu2) throw ConfigError("class means must differ");
  if (!(s.p1 > 0) || !(s.p2 > 0)) throw ConfigError("class probabilities must be positive");
  const double midpoint = 0.5 * (s.mu1 + s.mu2);
  return midpoint + s.sigma2 / (s.mu1 - s.mu2) * std::log(s.p1 / s.p2);
}

BlockFactor block_factor(const GrayImage& img, int block_size) {
  const auto grid = build_block_grid(img.width(), img.height(), block_size, 0);
  const auto tmap = threshold_map(img, grid);

  const auto n = static_cast<double>(tmap.thresholds.size());
  double mean = 0;
  for (auto t : tmap.thresholds) mean += t;
  mean /= n;
  double sigma2 = 0;
  for (auto t : tmap.thresholds) sigma2 += (t - mean) * (t - mean);
  sigma2 /= n;

  const double root4 = std::pow(static_cast<double>(block_size), 0.25);
  return {block_size, sigma2, sigma2 * root4, sigma2 / root4};
}

BlockFactorReport select_block_size(const GrayImage& img, std::span<const int> candidates,
                                    FactorMode mode) {
  if (candidates.empty()) throw ConfigError("no block size candidates");
  BlockFactorReport report;
  report.mode = mode;
  for (int n : candidates) report.candidates.push_back(block_factor(img, n));

  const BlockFactor* best = nullptr;
  for (const auto& c : report.candidates) {
    if (best == nullptr || c.factor(mode) > best->factor(mode) ||
        (c.factor(mode) == best->factor(mode) && c.block_size < best->block_size)) {
      best = &c;
    }
  }
  report.selected = best->block_size;
  return report;
}

Histogram histogram(const GrayImage& img) {
  Histogram h{};
  for (auto v : img.pixels()) ++h[v];
  return h;
}

__extension__ using Int128 = __int128;

std::uint8_t otsu_threshold(const Histogram& hist) {
  std::uint64_t total = 0;
  std::uint64_t total_sum = 0;
  for (int i = 0; i < 256; ++i) {
    total += hist[i];
    total_sum += static_cast<std::uint64_t>(i) * hist[i];
  }
  if (total == 0) throw ConfigError("empty histogram");

  // Between-class variance times total^2:
  //   (total_sum * n0 - total * s0)^2 / (n0 * (total - n0)).
  // The difference is exact in 128-bit integers so equal splits tie exactly.
  std::uint64_t n0 = 0, s0 = 0;
  long double best = -1;
  int best_t = 0;
  for (int t = 0; t < 256; ++t) {
    n0 += hist[t];
    s0 += static_cast<std::uint64_t>(t) * hist[t];
    long double between = 0;
    if (n0 > 0 && n0 < total) {
      const auto d = static_cast<Int128>(total_sum) * n0 - static_cast<Int128>(total) * s0;
      const auto dd = static_cast<long double>(d);
      between = dd * dd / (static_cast<long double>(n0) * static_cast<long double>(total - n0));
    }
    if (between > best) {
      best = between;
      best_t = t;
    }
  }
  return static_cast<std::uint8_t>(best_t);
}

double snr_ms(const BinaryImage& g, const BinaryImage& f) {
  require_same_size(g, f);
  const auto diff = count_differences(g, f);
  if (diff == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(g.popcount()) / static_cast<double>(diff);
}

double e_rms(const BinaryImage& g, const BinaryImage& f) {
  require_same_size(g, f);
  const auto diff = count_differences(g, f);
  return std::sqrt(static_cast<double>(diff) / static_cast<double>(g.size()));
}

double correlation(const BinaryImage& g, const BinaryImage& f) {
  require_same_size(g, f);
  const double n = static_cast<double>(g.size());
  double sg = 0, sf = 0, sgg = 0, sff = 0, sgf = 0;
  auto pg = g.pixels();
  auto pf = f.pixels();
  for (std::size_t i = 0; i < pg.size(); ++i) {
    const double a = pg[i], b = pf[i];
    sg += a;
    sf += b;
    sgg += a * a;
    sff += b * b;
    sgf += a * b;
  }
  const double var_g = sgg - sg * sg / n;
  const double var_f = sff - sf * sf / n;
  if (var_g <= 0 || var_f <= 0) throw ConfigError("correlation is undefined for a constant image");
  const double r = (sgf - sg * sf / n) / std::sqrt(var_g * var_f);
  return std::clamp(r, -1.0, 1.0);
}

QualityReport compare(const BinaryImage& reference, const BinaryImage& candidate) {
  QualityReport q;
  q.snr_ms = snr_ms(reference, candidate);
  q.e_rms = e_rms(reference, candidate);
  try {
    q.correlation = correlation(reference, candidate);
  } catch (const ConfigError&) {
    q.correlation.reset();
  }
  return q;
}

}  // namespace fpbin
