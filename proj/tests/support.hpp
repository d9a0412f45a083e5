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
#include <random>

#include "fpbin/image.hpp"

namespace fpbin::testing {

inline GrayImage random_gray(std::mt19937& rng, int w, int h) {
  std::uniform_int_distribution<int> px(0, 255);
  GrayImage img(w, h);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(px(rng));
  return img;
}

inline BinaryImage random_binary(std::mt19937& rng, int w, int h, double density = 0.5) {
  std::bernoulli_distribution bit(density);
  BinaryImage img(w, h);
  for (auto& p : img.pixels()) p = bit(rng) ? 1 : 0;
  return img;
}

inline bool subset_of(const BinaryImage& a, const BinaryImage& b) {
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      if (a.at(x, y) && !b.at(x, y)) return false;
  return true;
}

// Vertical bar of `width` ones, `height` rows tall, centred in a 40-wide frame.
inline BinaryImage bar_image(int width, int height) {
  BinaryImage img(40, height + 10);
  const int x0 = 20 - width / 2;
  for (int y = 5; y < 5 + height; ++y)
    for (int x = x0; x < x0 + width; ++x) img.set(x, y, true);
  return img;
}

}  // namespace fpbin::testing
