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

// fpbin-synth: deterministic synthetic fingerprint images for the sample corpus.
//
// Ridges are a cosine of a pattern-specific distance field (whorl, loop,
// arch, tented arch) with slowly varying ridge period, a warped coordinate
// frame, uneven finger pressure, an illumination gradient and sensor noise.
// The finger is an ellipse on a light background.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "fpbin/pnm.hpp"

namespace {

enum class Pattern { whorl, loop, arch, tented };

struct Spec {
  std::string name;
  Pattern pattern;
  double period;
  double noise;
  unsigned seed;
};

double smoothstep(double e0, double e1, double x) {
  const double t = std::clamp((x - e0) / (e1 - e0), 0.0, 1.0);
  return t * t * (3 - 2 * t);
}

// Sum of a few random low-frequency cosines, roughly in [-1, 1].
struct SmoothField {
  struct Wave {
    double fx, fy, phase, amp;
  };
  std::vector<Wave> waves;

  SmoothField(std::mt19937& rng, int count, double max_freq) {
    std::uniform_real_distribution<double> freq(-max_freq, max_freq);
    std::uniform_real_distribution<double> phase(0, 2 * std::numbers::pi);
    for (int i = 0; i < count; ++i) waves.push_back({freq(rng), freq(rng), phase(rng), 1.0 / count});
  }
  double operator()(double x, double y) const {
    double v = 0;
    for (const auto& w : waves) v += w.amp * std::cos(w.fx * x + w.fy * y + w.phase);
    return v;
  }
};

double distance_field(Pattern p, double x, double y, double cx, double cy) {
  const double dx = x - cx, dy = y - cy;
  switch (p) {
    case Pattern::whorl:
      return std::hypot(dx, 1.15 * dy);
    case Pattern::arch:
      return y - 70.0 * std::exp(-(dx * dx) / (2 * 110.0 * 110.0));
    case Pattern::tented:
      return y - 90.0 * std::exp(-std::abs(dx) / 70.0);
    case Pattern::loop: {
      // Nested U shapes: distance to a half-line running down from the core,
      // slanted by about 25 degrees.
      const double c = std::cos(0.45), s = std::sin(0.45);
      const double u = c * dx - s * dy;
      const double v = s * dx + c * dy;
      return v < 0 ? std::hypot(u, v) : std::abs(u);
    }
  }
  return 0;
}

fpbin::GrayImage render(const Spec& s, int size) {
  std::mt19937 rng(s.seed);
  SmoothField warp_x(rng, 4, 0.012), warp_y(rng, 4, 0.012);
  SmoothField pressure(rng, 5, 0.010), period_var(rng, 3, 0.008);
  std::normal_distribution<double> noise(0.0, s.noise);
  std::uniform_real_distribution<double> jitter(-25, 25);

  const double cx = size / 2.0 + jitter(rng);
  const double cy = size / 2.0 + jitter(rng);
  const double ax = size * 0.52, ay = size * 0.62;
  const double gx = jitter(rng) / 500.0, gy = jitter(rng) / 500.0;

  fpbin::GrayImage img(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double wx = x + 6.0 * warp_x(x, y);
      const double wy = y + 6.0 * warp_y(x, y);
      const double period = s.period * (1.0 + 0.12 * period_var(x, y));
      const double phase = 2 * std::numbers::pi * distance_field(s.pattern, wx, wy, cx, cy) / period;
      const double ridge = 0.5 + 0.5 * std::cos(phase);  // 1 on ridge centres

      const double ex = (x - cx) / ax, ey = (y - cy) / ay;
      const double inside = 1.0 - smoothstep(0.85, 1.0, std::sqrt(ex * ex + ey * ey));

      const double light = 215.0 + 40.0 * (gx * (x - cx) + gy * (y - cy)) / size * 10.0;
      const double contrast = 120.0 * (0.75 + 0.25 * pressure(x, y)) * inside;
      double v = light - contrast * ridge + noise(rng);
      img.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return img;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic fingerprint sample corpus"};
  std::string out_dir = "data/corpus";
  int size = 512;
  app.add_option("-o,--out-dir", out_dir, "Output directory");
  app.add_option("--size", size, "Image side length in pixels")->check(CLI::Range(64, 4096));
  CLI11_PARSE(app, argc, argv);

  const Spec specs[] = {
      {"whorl_a", Pattern::whorl, 9.0, 10.0, 101},  {"whorl_b", Pattern::whorl, 10.5, 14.0, 102},
      {"loop_a", Pattern::loop, 8.5, 10.0, 201},    {"loop_b", Pattern::loop, 10.0, 16.0, 202},
      {"arch_a", Pattern::arch, 9.5, 10.0, 301},    {"arch_b", Pattern::arch, 11.0, 14.0, 302},
      {"tented_a", Pattern::tented, 9.0, 12.0, 401}, {"tented_b", Pattern::tented, 10.0, 18.0, 402},
  };

  std::filesystem::create_directories(out_dir);
  for (const auto& s : specs) {
    const auto path = std::filesystem::path(out_dir) / ("synth_" + s.name + ".pgm");
    fpbin::write_file(path, fpbin::save_pgm(render(s, size)));
    std::cout << path.string() << '\n';
  }
  return 0;
}
