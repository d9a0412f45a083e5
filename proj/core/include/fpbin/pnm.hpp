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
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpbin/image.hpp"

namespace fpbin {

/// Malformed or unsupported netpbm input. `field()` names the offending part
/// of the file ("magic", "width", "maxval", "payload", ...).
class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

using Bytes = std::vector<std::uint8_t>;

// Binary variants only (P5 / P4). Header comments are accepted on load; save
// always writes the canonical "P5\n<w> <h>\n255\n" form.
GrayImage load_pgm(std::span<const std::uint8_t> bytes);
Bytes save_pgm(const GrayImage& img);

BinaryImage load_pbm(std::span<const std::uint8_t> bytes);
Bytes save_pbm(const BinaryImage& img);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace fpbin
