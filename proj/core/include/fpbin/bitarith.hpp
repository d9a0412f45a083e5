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

#include <cstdint>
#include <span>
#include <vector>

namespace fpbin::bitarith {

/// Unsigned value held in a register of fixed bit width.
class BitVector {
 public:
  BitVector() = default;
  /// Throws ConfigError if `value` does not fit in `width` bits or width is
  /// outside [1, 63].
  BitVector(int width, std::uint64_t value);

  int width() const { return width_; }
  std::uint64_t value() const { return value_; }
  bool bit(int i) const { return (value_ >> i) & 1u; }

  /// Same value in a wider or narrower register; narrowing must not drop set bits.
  BitVector resized(int width) const { return BitVector(width, value_); }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  int width_ = 1;
  std::uint64_t value_ = 0;
};

struct CsaOutput {
  BitVector sum;    // same width as the operands
  BitVector carry;  // one bit wider, already shifted left by one
};

/// 3:2 carry-save adder over equal-width operands. a+b+c == sum+carry.
CsaOutput csa(const BitVector& a, const BitVector& b, const BitVector& c);

struct ReductionLayer {
  int operands_in = 0;
  int csa_count = 0;
  int operands_out = 0;
  std::uint64_t operand_sum = 0;  // integer sum of the layer's outputs
};

struct ReductionResult {
  BitVector sum;
  BitVector carry;
  std::vector<ReductionLayer> layers;
};

/// Dadda maximum-height sequence 2, 3, 4, 6, 9, 13, 19, ... up to (excluding)
/// the first value >= `operands`.
std::vector<int> dadda_heights(int operands);

/// Word-level Dadda reduction of any number (>= 3) of operands to two. Each
/// layer uses exactly enough CSAs to reach the next lower Dadda height;
/// CSAs take the widest operands first. Operand widths are capped at the
/// bit width of the largest possible total.
ReductionResult dadda_reduce(std::span<const BitVector> inputs);

/// The MVCU adder tree: seventeen 8-bit operands (one block row of sixteen
/// pixels plus the feedback byte), reduced 17 -> 13 -> 9 -> 6 -> 4 -> 3 -> 2.
ReductionResult dadda_reduce_17(std::span<const BitVector> inputs);

/// Carry-lookahead addition built from chained 4-bit generate/propagate
/// blocks. `out_width` 0 means max(a.width, b.width) + 1. Throws ConfigError
/// if the sum does not fit in `out_width`.
BitVector cla_add(const BitVector& a, const BitVector& b, int out_width = 0);

inline constexpr int kMvcuRows = 16;
inline constexpr int kMvcuRowPixels = 16;

/// Accumulator of one mean value calculator unit.
///
/// Each cycle adds one 16-pixel block row to the fed-back low byte. The low
/// byte of the adder output is fed back; the high part is accumulated so that
/// after all sixteen rows high_accum == floor(block_sum / 256).
struct MvcuState {
  std::uint8_t low_feedback = 0;
  std::uint32_t high_accum = 0;
  int cycles_done = 0;

  friend bool operator==(const MvcuState&, const MvcuState&) = default;
};

/// One MVCU clock. Throws ConfigError on a seventeenth cycle or a row that is
/// not exactly sixteen pixels.
MvcuState mvcu_cycle(const MvcuState& state, std::span<const std::uint8_t> row);

/// Mean of a 16x16 block (row-major, 256 values) through sixteen MVCU cycles.
std::uint8_t mvcu_mean(std::span<const std::uint8_t> block);

}  // namespace fpbin::bitarith
