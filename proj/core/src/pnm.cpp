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

#include "fpbin/pnm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <limits>

namespace fpbin {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void expect_magic(const char* magic) {
    if (bytes_.size() < 2 || bytes_[0] != 'P') throw DecodeError("magic", "not a netpbm file");
    if (bytes_[1] != static_cast<std::uint8_t>(magic[1])) {
      if (bytes_[1] == '1' || bytes_[1] == '2') {
        throw DecodeError("magic", "ASCII netpbm variants are not supported");
      }
      throw DecodeError("magic", std::string("expected ") + magic);
    }
    pos_ = 2;
  }

  long read_number(const char* field) {
    skip_whitespace_and_comments();
    if (pos_ >= bytes_.size()) throw DecodeError(field, "unexpected end of header");
    if (!std::isdigit(bytes_[pos_])) throw DecodeError(field, "expected a decimal number");
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > std::numeric_limits<int>::max()) throw DecodeError(field, "value too large");
      ++pos_;
    }
    return value;
  }

  // Exactly one whitespace byte separates the header from the raster.
  void end_header(const char* field) {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw DecodeError(field, "missing whitespace before raster data");
    }
    ++pos_;
  }

  std::span<const std::uint8_t> payload(std::size_t expected) const {
    if (bytes_.size() - pos_ < expected) {
      throw DecodeError("payload", "truncated: expected " + std::to_string(expected) +
                                       " bytes, found " + std::to_string(bytes_.size() - pos_));
    }
    return bytes_.subspan(pos_, expected);
  }

 private:
  void skip_whitespace_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

int checked_dimension(long v, const char* field) {
  if (v <= 0) throw DecodeError(field, "must be positive");
  return static_cast<int>(v);
}

void append(Bytes& out, const std::string& s) { out.insert(out.end(), s.begin(), s.end()); }

}  // namespace

GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
  HeaderReader reader(bytes);
  reader.expect_magic("P5");
  const int width = checked_dimension(reader.read_number("width"), "width");
  const int height = checked_dimension(reader.read_number("height"), "height");
  const long maxval = reader.read_number("maxval");
  if (maxval > 255) throw DecodeError("maxval", "unsupported maxval " + std::to_string(maxval));
  if (maxval < 1) throw DecodeError("maxval", "must be at least 1");
  reader.end_header("maxval");

  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  auto raster = reader.payload(count);
  for (auto v : raster) {
    if (v > maxval) throw DecodeError("payload", "pixel value exceeds maxval");
  }
  return GrayImage(width, height, raster);
}

Bytes save_pgm(const GrayImage& img) {
  Bytes out;
  append(out, "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n");
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

BinaryImage load_pbm(std::span<const std::uint8_t> bytes) {
  HeaderReader reader(bytes);
  reader.expect_magic("P4");
  const int width = checked_dimension(reader.read_number("width"), "width");
  const int height = checked_dimension(reader.read_number("height"), "height");
  reader.end_header("height");

  const auto stride = static_cast<std::size_t>((width + 7) / 8);
  auto raster = reader.payload(stride * static_cast<std::size_t>(height));
  BinaryImage img(width, height);
  for (int y = 0; y < height; ++y) {
    const auto* line = raster.data() + stride * static_cast<std::size_t>(y);
    for (int x = 0; x < width; ++x) {
      img.at(x, y) = (line[x / 8] >> (7 - x % 8)) & 1u;
    }
  }
  return img;
}

Bytes save_pbm(const BinaryImage& img) {
  Bytes out;
  append(out, "P4\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n");
  const auto stride = static_cast<std::size_t>((img.width() + 7) / 8);
  for (int y = 0; y < img.height(); ++y) {
    Bytes line(stride, 0);
    auto row = img.row(y);
    for (int x = 0; x < img.width(); ++x) {
      if (row[x]) line[x / 8] |= static_cast<std::uint8_t>(0x80u >> (x % 8));
    }
    out.insert(out.end(), line.begin(), line.end());
  }
  return out;
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace fpbin
