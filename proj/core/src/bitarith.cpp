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

#include "fpbin/bitarith.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "fpbin/image.hpp"

namespace fpbin::bitarith {

BitVector::BitVector(int width, std::uint64_t value) : width_(width), value_(value) {
  if (width < 1 || width > 63) throw ConfigError("bit width out of range: " + std::to_string(width));
  if (std::bit_width(value) > static_cast<unsigned>(width)) {
    throw ConfigError("value " + std::to_string(value) + " does not fit in " + std::to_string(width) +
                      " bits");
  }
}

CsaOutput csa(const BitVector& a, const BitVector& b, const BitVector& c) {
  if (a.width() != b.width() || a.width() != c.width()) {
    throw ConfigError("csa operands must have equal widths");
  }
  const std::uint64_t x = a.value(), y = b.value(), z = c.value();
  const std::uint64_t sum = x ^ y ^ z;
  const std::uint64_t majority = (x & y) | (x & z) | (y & z);
  return {BitVector(a.width(), sum), BitVector(a.width() + 1, majority << 1)};
}

std::vector<int> dadda_heights(int operands) {
  std::vector<int> heights{2};
  while (true) {
    const int next = heights.back() * 3 / 2;
    if (next >= operands) break;
    heights.push_back(next);
  }
  return heights;
}

ReductionResult dadda_reduce(std::span<const BitVector> inputs) {
  if (inputs.size() < 3) throw ConfigError("dadda_reduce needs at least three operands");

  std::uint64_t max_total = 0;
  for (const auto& in : inputs) max_total += (std::uint64_t{1} << in.width()) - 1;
  const int cap = std::max(1, static_cast<int>(std::bit_width(max_total)));

  std::vector<BitVector> operands(inputs.begin(), inputs.end());
  auto heights = dadda_heights(static_cast<int>(operands.size()));

  ReductionResult result;
  for (auto target = heights.rbegin(); target != heights.rend(); ++target) {
    const int count = static_cast<int>(operands.size());
    const int csas = count - *target;

    // Widest first; stable so equal widths keep their input order.
    std::stable_sort(operands.begin(), operands.end(),
                     [](const BitVector& l, const BitVector& r) { return l.width() > r.width(); });

    std::vector<BitVector> next;
    next.reserve(static_cast<std::size_t>(*target));
    for (int k = 0; k < csas; ++k) {
      const int w = operands[3 * k].width();
      auto out = csa(operands[3 * k].resized(w), operands[3 * k + 1].resized(w),
                     operands[3 * k + 2].resized(w));
      next.push_back(out.sum);
      next.push_back(out.carry.resized(std::min(out.carry.width(), cap)));
    }
    for (int k = 3 * csas; k < count; ++k) next.push_back(operands[k]);

    ReductionLayer layer{count, csas, static_cast<int>(next.size()), 0};
    for (const auto& op : next) layer.operand_sum += op.value();
    result.layers.push_back(layer);
    operands = std::move(next);
  }

  result.sum = operands[0];
  result.carry = operands[1];
  return result;
}

ReductionResult dadda_reduce_17(std::span<const BitVector> inputs) {
  if (inputs.size() != 17) throw ConfigError("MVCU adder takes exactly 17 operands");
  for (const auto& in : inputs) {
    if (in.width() != 8) throw ConfigError("MVCU adder operands must be 8 bits wide");
  }
  return dadda_reduce(inputs);
}

BitVector cla_add(const BitVector& a, const BitVector& b, int out_width) {
  const int width = std::max(a.width(), b.width());
  if (out_width == 0) out_width = width + 1;

  std::uint64_t sum = 0;
  bool carry_in = false;
  for (int base = 0; base < width; base += 4) {
    bool g[4], p[4], c[5];
    for (int i = 0; i < 4; ++i) {
      const bool x = base + i < a.width() && a.bit(base + i);
      const bool y = base + i < b.width() && b.bit(base + i);
      g[i] = x && y;
      p[i] = x != y;
    }
    // c[k] = g[k-1] | p[k-1]g[k-2] | ... | p[k-1]...p[0]c0, evaluated flat.
    c[0] = carry_in;
    for (int k = 1; k <= 4; ++k) {
      bool term = true;
      for (int m = 0; m < k; ++m) term = term && p[m];
      bool carry = term && carry_in;
      for (int j = 0; j < k; ++j) {
        bool t = g[j];
        for (int m = j + 1; m < k; ++m) t = t && p[m];
        carry = carry || t;
      }
      c[k] = carry;
    }
    for (int i = 0; i < 4; ++i) {
      if (p[i] != c[i]) sum |= std::uint64_t{1} << (base + i);
    }
    carry_in = c[4];
  }
  const int blocks_width = (width + 3) / 4 * 4;
  if (carry_in) sum |= std::uint64_t{1} << blocks_width;

  if (std::bit_width(sum) > static_cast<unsigned>(out_width)) {
    throw ConfigError("cla_add overflow: sum needs more than " + std::to_string(out_width) + " bits");
  }
  return BitVector(out_width, sum);
}

MvcuState mvcu_cycle(const MvcuState& state, std::span<const std::uint8_t> row) {
  if (state.cycles_done >= kMvcuRows) throw ConfigError("MVCU cycle overrun");
  if (row.size() != static_cast<std::size_t>(kMvcuRowPixels)) {
    throw ConfigError("MVCU row must hold 16 pixels");
  }
  std::vector<BitVector> operands;
  operands.reserve(17);
  for (auto px : row) operands.emplace_back(8, px);
  operands.emplace_back(8, state.low_feedback);

  const auto tree = dadda_reduce_17(operands);
  const auto total = cla_add(tree.sum, tree.carry).value();

  MvcuState next = state;
  next.low_feedback = static_cast<std::uint8_t>(total & 0xFFu);
  next.high_accum += static_cast<std::uint32_t>(total >> 8);
  next.cycles_done += 1;
  return next;
}

std::uint8_t mvcu_mean(std::span<const std::uint8_t> block) {
  if (block.size() != static_cast<std::size_t>(kMvcuRows * kMvcuRowPixels)) {
    throw ConfigError("MVCU block must hold 256 pixels");
  }
  MvcuState state;
  for (int r = 0; r < kMvcuRows; ++r) {
    state = mvcu_cycle(state, block.subspan(static_cast<std::size_t>(r * kMvcuRowPixels), kMvcuRowPixels));
  }
  return static_cast<std::uint8_t>(state.high_accum);
}

}  // namespace fpbin::bitarith
