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
#include <cstddef>
#include <cstdint>
#include <vector>

#include "fpbin/image.hpp"

namespace fpbin::morphology {

// Neighbourhood codes pack the eight neighbours of a pixel P1 clockwise from
// north, bit 0 = P2:
//
//   P9 P2 P3        bit 7 bit 0 bit 1
//   P8 P1 P4   ->   bit 6   .   bit 2
//   P7 P6 P5        bit 5 bit 4 bit 3
//
// Pixels outside the image read as 0.
using NeighborCode = std::uint8_t;

enum class Phase { first, second };

inline constexpr int kDefaultMinNeighbors = 3;
inline constexpr int kDefaultIterations = 6;

NeighborCode neighborhood_code(const BinaryImage& img, int x, int y);

/// The same neighbourhood seen after rotating the image by 180 degrees.
constexpr NeighborCode rotate_code_180(NeighborCode code) {
  return static_cast<NeighborCode>((code >> 4) | (code << 4));
}

/// A(P1): number of 0 -> 1 transitions around the ring P2, P3, ..., P9, P2.
int neighbor_transitions(NeighborCode code);

/// B(P1): number of foreground neighbours.
int neighbor_sum(NeighborCode code);

/// Deletion test for a foreground P1.
///
/// Both phases need min_neighbors <= B(P1) <= 6 and A(P1) == 1. The first
/// phase additionally needs P2&P4&P6 == 0 and P4&P6&P8 == 0 (south-east
/// boundary); the second needs P2&P4&P8 == 0 and P2&P6&P8 == 0 (north-west).
/// `min_neighbors` = 2 gives the classic Zhang-Suen bound.
bool deletable(NeighborCode code, Phase phase, int min_neighbors = kDefaultMinNeighbors);

/// The two 256-entry deletion tables evaluated by the thinning circuits.
struct ThinningLUT {
  std::array<bool, 256> phase1{};
  std::array<bool, 256> phase2{};

  bool deletes(NeighborCode code, Phase phase) const {
    return phase == Phase::first ? phase1[code] : phase2[code];
  }
  std::array<bool, 256>& table(Phase phase) { return phase == Phase::first ? phase1 : phase2; }

  friend bool operator==(const ThinningLUT&, const ThinningLUT&) = default;
};

ThinningLUT build_lut(int min_neighbors = kDefaultMinNeighbors);

/// Process-wide table for the default rule.
const ThinningLUT& default_lut();

struct PassResult {
  BinaryImage image;
  std::size_t changed = 0;
};

/// One parallel sub-iteration: every decision reads the input image only.
PassResult thin_pass(const BinaryImage& img, Phase phase, const ThinningLUT& lut = default_lut());

struct ThinningResult {
  BinaryImage image;
  std::vector<std::size_t> changed_per_iteration;  // phase I + phase II deletions
  int iterations_run = 0;
};

/// `iterations` rounds of (phase I, phase II). With `early_exit`, stops after
/// the first round that deletes nothing.
ThinningResult thin(const BinaryImage& img, int iterations = kDefaultIterations,
                    bool early_exit = false, const ThinningLUT& lut = default_lut());

/// Per-iteration deletion counts of `max_iter` rounds normalised by the first
/// round's count. All zeros when the first round deletes nothing.
std::vector<double> iteration_profile(const BinaryImage& img, int max_iter,
                                      const ThinningLUT& lut = default_lut());

/// out(x, y) = in(x, y) | in(x+1, y) | in(x, y+1) | in(x+1, y+1).
BinaryImage dilate_2x2(const BinaryImage& img);

}  // namespace fpbin::morphology
