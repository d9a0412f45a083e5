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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpbin {

/// Raised when an argument violates a documented precondition.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when two images that must agree in size do not.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Rect {
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;

  friend bool operator==(const Rect&, const Rect&) = default;
};

namespace detail {

// Shared storage for the two raster kinds. Row-major, one element per pixel.
template <typename Pixel>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, Pixel fill = Pixel{0})
      : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
      throw ConfigError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                        std::to_string(height));
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  Pixel at(int x, int y) const { return data_[index(x, y)]; }
  Pixel& at(int x, int y) { return data_[index(x, y)]; }

  // Out-of-range reads return zero; used by the neighbourhood operators.
  Pixel get_or_zero(int x, int y) const {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return Pixel{0};
    return data_[index(x, y)];
  }

  std::span<const Pixel> row(int y) const {
    return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }
  std::span<Pixel> row(int y) {
    return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }

  std::span<const Pixel> pixels() const { return data_; }
  std::span<Pixel> pixels() { return data_; }

  bool contains(const Rect& r) const {
    return r.w > 0 && r.h > 0 && r.x0 >= 0 && r.y0 >= 0 && r.x0 + r.w <= width_ &&
           r.y0 + r.h <= height_;
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Pixel> data_;
};

}  // namespace detail

/// 8-bit gray levels; 0 is black.
class GrayImage : public detail::Raster<std::uint8_t> {
 public:
  using Raster::Raster;
  GrayImage(int width, int height, std::span<const std::uint8_t> pixels);
};

/// One value in {0,1} per pixel; 1 is foreground (ridge).
class BinaryImage : public detail::Raster<std::uint8_t> {
 public:
  using Raster::Raster;
  BinaryImage(int width, int height, std::span<const std::uint8_t> bits);

  void set(int x, int y, bool v) { at(x, y) = v ? 1 : 0; }
  std::size_t popcount() const;
};

GrayImage crop(const GrayImage& img, const Rect& r);
BinaryImage crop(const BinaryImage& img, const Rect& r);

BinaryImage complement(const BinaryImage& img);
BinaryImage rotate180(const BinaryImage& img);

/// Number of positions where the two images differ.
std::size_t count_differences(const BinaryImage& a, const BinaryImage& b);

}  // namespace fpbin
