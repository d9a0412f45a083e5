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

#include "fpbin/image.hpp"

#include <algorithm>

namespace fpbin {

namespace {

template <typename Img>
Img crop_impl(const Img& img, const Rect& r) {
  if (!img.contains(r)) {
    throw ConfigError("crop rectangle (" + std::to_string(r.x0) + "," + std::to_string(r.y0) + "," +
                      std::to_string(r.w) + "," + std::to_string(r.h) +
                      ") lies outside the image");
  }
  Img out(r.w, r.h);
  for (int y = 0; y < r.h; ++y) {
    auto src = img.row(r.y0 + y).subspan(static_cast<std::size_t>(r.x0), static_cast<std::size_t>(r.w));
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::span<const std::uint8_t> pixels)
    : Raster(width, height) {
  if (pixels.size() != size()) {
    throw DimensionError("pixel count " + std::to_string(pixels.size()) + " does not match " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
  std::copy(pixels.begin(), pixels.end(), this->pixels().begin());
}

BinaryImage::BinaryImage(int width, int height, std::span<const std::uint8_t> bits)
    : Raster(width, height) {
  if (bits.size() != size()) {
    throw DimensionError("bit count " + std::to_string(bits.size()) + " does not match " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw ConfigError("binary image values must be 0 or 1");
    pixels()[i] = bits[i];
  }
}

std::size_t BinaryImage::popcount() const {
  return static_cast<std::size_t>(std::count(pixels().begin(), pixels().end(), std::uint8_t{1}));
}

GrayImage crop(const GrayImage& img, const Rect& r) { return crop_impl(img, r); }
BinaryImage crop(const BinaryImage& img, const Rect& r) { return crop_impl(img, r); }

BinaryImage complement(const BinaryImage& img) {
  BinaryImage out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ^ 1u;
  return out;
}

BinaryImage rotate180(const BinaryImage& img) {
  BinaryImage out(img.width(), img.height());
  auto src = img.pixels();
  std::reverse_copy(src.begin(), src.end(), out.pixels().begin());
  return out;
}

std::size_t count_differences(const BinaryImage& a, const BinaryImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionError("images differ in size");
  }
  std::size_t n = 0;
  auto pa = a.pixels();
  auto pb = b.pixels();
  for (std::size_t i = 0; i < pa.size(); ++i) n += (pa[i] != pb[i]) ? 1 : 0;
  return n;
}

}  // namespace fpbin
