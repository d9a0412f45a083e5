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

#include <cstdio>
#include <sstream>

#include "fpbin/pipeline.hpp"

namespace fpbin::sim {

namespace {

std::vector<PixelDiff> diff_image(const BinaryImage& a, const BinaryImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) throw DimensionError("tap images differ in size");
  std::vector<PixelDiff> out;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      if (a.at(x, y) != b.at(x, y)) out.push_back({x, y});
    }
  }
  return out;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

ReferenceOutputs reference_outputs(const GrayImage& img, const PipelineConfig& cfg) {
  const auto grid = build_block_grid(img.width(), img.height(), cfg.block_size, cfg.overlap);
  auto binarized = binarize(img, threshold_map(img, grid), cfg.polarity);
  auto dilated = morphology::dilate_2x2(binarized);
  auto thinned = morphology::thin(dilated, cfg.thinning_superstages).image;
  return {std::move(binarized), std::move(dilated), std::move(thinned)};
}

EquivalenceReport diff_outputs(const SimTrace& trace, const ReferenceOutputs& ref) {
  return {diff_image(trace.binarized, ref.binarized), diff_image(trace.dilated, ref.dilated),
          diff_image(trace.thinned, ref.thinned)};
}

EquivalenceReport verify_against_reference(const GrayImage& img, const PipelineConfig& cfg) {
  Pipeline pipeline(cfg);
  return verify_against_reference(pipeline, img);
}

EquivalenceReport verify_against_reference(Pipeline& pipeline, const GrayImage& img) {
  const auto trace = pipeline.run(img);
  return diff_outputs(trace, reference_outputs(img, pipeline.config()));
}

TimingReport timing_report(const SimTrace& trace, double clock_hz) {
  if (!(clock_hz > 0)) throw ConfigError("clock frequency must be positive");
  TimingReport r;
  r.main_clocks = trace.main_clocks;
  r.pipeline_clocks = trace.pipeline_clocks;
  r.phases = trace.phases;
  r.clock_hz = clock_hz;
  r.seconds = static_cast<double>(trace.main_clocks) / clock_hz;
  r.mvcu_lanes = trace.mvcu_lanes;
  return r;
}

std::string format_timing_report(const TimingReport& r) {
  std::ostringstream os;
  os << "main_clocks " << r.main_clocks << '\n'
     << "pipeline_clocks " << r.pipeline_clocks << '\n'
     << "phase.input " << r.phases.input << '\n'
     << "phase.binarize " << r.phases.binarize << '\n'
     << "phase.dilate " << r.phases.dilate << '\n'
     << "phase.thin " << r.phases.thin << '\n'
     << "phase.output " << r.phases.output << '\n'
     << "mvcu_lanes " << r.mvcu_lanes << " (published design: " << r.published.mvcu_count << ")\n"
     << "clock_mhz " << fixed(r.clock_hz / 1e6, 3) << '\n'
     << "estimated_ms " << fixed(r.seconds * 1e3, 3) << '\n'
     << "published_clock_mhz " << fixed(r.published.clock_hz / 1e6, 1) << '\n'
     << "published_frame_ms " << fixed(r.published.frame_seconds * 1e3, 2) << '\n'
     << "published_critical_path_ns " << fixed(r.published.critical_path_ns, 2) << '\n';
  return os.str();
}

}  // namespace fpbin::sim
