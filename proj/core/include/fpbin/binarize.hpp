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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fpbin/image.hpp"

namespace fpbin {

/// Tiling of an image into equal NxN blocks.
///
/// Origins advance by (block_size - overlap) along each axis. The last block
/// of an axis is shifted back so it ends exactly on the image edge, so every
/// block is a full NxN square. Where blocks overlap, a pixel belongs to the
/// block with the smallest (y0, x0).
class BlockGrid {
 public:
  BlockGrid(int width, int height, int block_size, int overlap);

  int width() const { return width_; }
  int height() const { return height_; }
  int block_size() const { return block_size_; }
  int overlap() const { return overlap_; }

  const std::vector<int>& x_origins() const { return x_origins_; }
  const std::vector<int>& y_origins() const { return y_origins_; }
  int columns() const { return static_cast<int>(x_origins_.size()); }
  int rows() const { return static_cast<int>(y_origins_.size()); }
  std::size_t block_count() const { return x_origins_.size() * y_origins_.size(); }

  /// Blocks in row-major order of (block row, block column).
  Rect block(std::size_t index) const;
  std::vector<Rect> blocks() const;

  /// Owning block column for pixel column x (and likewise for rows).
  int owner_column(int x) const { return x_owner_[static_cast<std::size_t>(x)]; }
  int owner_row(int y) const { return y_owner_[static_cast<std::size_t>(y)]; }
  std::size_t owner_block(int x, int y) const {
    return static_cast<std::size_t>(owner_row(y)) * x_origins_.size() +
           static_cast<std::size_t>(owner_column(x));
  }

 private:
  int width_, height_, block_size_, overlap_;
  std::vector<int> x_origins_, y_origins_;
  std::vector<int> x_owner_, y_owner_;
};

/// Origins along one axis of length `extent`; exposed for the simulator's
/// lane layout.
std::vector<int> block_origins(int extent, int block_size, int overlap);

BlockGrid build_block_grid(int width, int height, int block_size, int overlap);

struct ThresholdMap {
  BlockGrid grid;
  std::vector<std::uint8_t> thresholds;  // one per grid block, same order

  std::uint8_t threshold_for(int x, int y) const { return thresholds[grid.owner_block(x, y)]; }
};

enum class Polarity {
  light_foreground,  // g = 1 iff f > T
  dark_foreground,   // g = 1 iff f <= T
};

/// floor(sum / area) over the block.
std::uint8_t block_mean_threshold(const GrayImage& img, const Rect& block);

ThresholdMap threshold_map(const GrayImage& img, const BlockGrid& grid);

BinaryImage binarize(const GrayImage& img, const ThresholdMap& tmap,
                     Polarity polarity = Polarity::dark_foreground);

/// Single global threshold, same comparison rule as the block-wise variant.
BinaryImage binarize_global(const GrayImage& img, std::uint8_t threshold,
                            Polarity polarity = Polarity::dark_foreground);

struct ClassStats {
  double mu1 = 0;
  double mu2 = 0;
  double sigma2 = 0;
  double p1 = 0.5;
  double p2 = 0.5;
};

/// Minimum-error threshold between two equal-variance classes:
/// (mu1 + mu2)/2 + sigma2/(mu1 - mu2) * ln(p1/p2).
double optimal_threshold(const ClassStats& stats);

enum class FactorMode {
  multiply,  // sigma^2 * N^(1/4)
  divide,    // sigma^2 / N^(1/4)
};

struct BlockFactor {
  int block_size = 0;
  double sigma2 = 0;       // population variance of the block thresholds
  double factor_mul = 0;   // sigma2 * N^(1/4)
  double factor_div = 0;   // sigma2 / N^(1/4)

  double factor(FactorMode mode) const { return mode == FactorMode::multiply ? factor_mul : factor_div; }
};

/// Block factor on a non-overlapping NxN tiling (edge blocks clamped).
BlockFactor block_factor(const GrayImage& img, int block_size);

struct BlockFactorReport {
  FactorMode mode = FactorMode::multiply;
  std::vector<BlockFactor> candidates;
  int selected = 0;  // argmax of the factor under `mode`, smaller N on ties
};

inline constexpr std::array<int, 4> kDefaultBlockCandidates{4, 16, 64, 256};

BlockFactorReport select_block_size(const GrayImage& img, std::span<const int> candidates,
                                    FactorMode mode = FactorMode::multiply);

using Histogram = std::array<std::uint64_t, 256>;

Histogram histogram(const GrayImage& img);

/// Otsu's threshold: t maximising the between-class variance of {<= t} vs
/// {> t}; smallest t on ties.
std::uint8_t otsu_threshold(const Histogram& hist);

/// sum(G^2) / sum((G - F)^2); +infinity when the images agree everywhere.
double snr_ms(const BinaryImage& g, const BinaryImage& f);

/// sqrt(sum((G - F)^2) / MN).
double e_rms(const BinaryImage& g, const BinaryImage& f);

/// Pearson correlation of the flattened 0/1 values. Throws ConfigError when
/// either image is constant.
double correlation(const BinaryImage& g, const BinaryImage& f);

struct QualityReport {
  double snr_ms = 0;
  double e_rms = 0;
  std::optional<double> correlation;  // empty when undefined
};

QualityReport compare(const BinaryImage& reference, const BinaryImage& candidate);

}  // namespace fpbin
