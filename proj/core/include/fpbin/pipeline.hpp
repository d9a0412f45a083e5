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
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fpbin/binarize.hpp"
#include "fpbin/image.hpp"
#include "fpbin/morphology.hpp"

namespace fpbin::sim {

struct PipelineConfig {
  int row_width = 512;
  int bus_width = 32;  // bits, shared by the input and output buses
  int pixel_bits = 8;
  int block_size = 16;
  int overlap = 1;
  int thinning_superstages = 6;
  Polarity polarity = Polarity::dark_foreground;
  std::optional<double> clock_hz;

  int pixels_per_clock() const { return bus_width / pixel_bits; }
  /// Main clocks to load one row; also the main-to-pipeline clock divider.
  int row_load_clocks() const { return row_width / pixels_per_clock(); }
  int output_clocks_per_row() const { return row_width / bus_width; }
  int counter_bits() const;

  /// Throws ConfigError on an unsupported combination.
  void validate() const;
};

// Stage identifiers as they appear in the exported event log.
enum class Unit : std::uint8_t {
  input,      // "in"
  clock,      // "clk"
  mvcu,       // "mvcu<bank>"
  binarize,   // "bin"
  dilate,     // "dil"
  tpc,        // "ss<superstage>.tpc<1|2>"
  output,     // "out"
  pipeline,   // "sim"
};

enum class EventKind : std::uint8_t {
  load_word,   // row, word
  row_ready,   // row fully held by the input registers
  tick,        // pipeline clock number
  accumulate,  // block row, image row
  latch,       // block row
  emit,        // row (tpc: deleted pixel count in `b`)
  out_load,    // row
  out_word,    // row, word
  out_done,    // row
  idle,        // step on a drained pipeline
};

struct Event {
  std::uint64_t main_clock = 0;
  Unit unit = Unit::pipeline;
  int index = 0;  // bank for mvcu, stage number for tpc
  EventKind kind = EventKind::idle;
  std::int64_t a = 0;
  std::int64_t b = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

/// "<main_clock> <stage_id> <event>" as written to trace files.
std::string format_event(const Event& e);
void write_event_log(std::ostream& os, const std::vector<Event>& events);

struct PhaseClocks {
  std::uint64_t input = 0;
  std::uint64_t binarize = 0;
  std::uint64_t dilate = 0;
  std::uint64_t thin = 0;
  std::uint64_t output = 0;

  std::uint64_t total() const { return input + binarize + dilate + thin + output; }
};

struct RowTiming {
  std::int64_t load_first = -1;  // main clock of the first input word
  std::int64_t load_last = -1;
  std::int64_t out_first = -1;   // main clock of the first output word
  std::int64_t out_last = -1;
};

/// Everything observable after a run.
///
/// `phases` attributes every main clock to exactly one phase: input while
/// the input bus is transferring, otherwise the furthest-upstream part of
/// the pipeline still holding frame data. `input_bus_clocks` and
/// `output_bus_clocks` count bus activity independently of that attribution.
struct SimTrace {
  std::uint64_t main_clocks = 0;
  std::uint64_t pipeline_clocks = 0;
  PhaseClocks phases;
  std::uint64_t input_bus_clocks = 0;
  std::uint64_t output_bus_clocks = 0;
  std::vector<RowTiming> rows;

  int mvcu_lanes = 0;
  int mvcu_banks = 0;
  int thinning_stages = 0;
  std::size_t max_row_buffer_occupancy = 0;
  /// Pipeline clocks at which each bank's threshold registers were latched.
  std::vector<std::vector<std::uint64_t>> latch_ticks;

  BinaryImage binarized;
  BinaryImage dilated;
  BinaryImage thinned;

  std::vector<Event> events;  // empty unless event recording is on
};

/// Cycle-level model of the streaming binarise / dilate / thin pipeline.
///
/// The input distributor fills row registers four pixels per main clock; a
/// counter divides the main clock into the pipeline clock, on which every
/// stage latches a whole row from its predecessor. Stages in order:
///
///   input distributor
///   binarisation: row buffers + one MVCU per block column in each bank;
///     a row is compared once its owning block's mean is latched
///   dilation (holds one row)
///   superstages x (TPC1 over a 3-row window, TPC2 over a 3-row window)
///   output buffer, drained over the output bus
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg = {});
  ~Pipeline();
  Pipeline(Pipeline&&) noexcept;
  Pipeline& operator=(Pipeline&&) noexcept;

  const PipelineConfig& config() const;
  int mvcu_lanes() const;
  /// Stage count of the thinning section (six per superstage).
  int thinning_stage_count() const;

  void set_record_events(bool on);

  /// Flip one entry of a single TPC's deletion table. For fault injection.
  void inject_lut_fault(int superstage, morphology::Phase phase, morphology::NeighborCode code);

  /// Reset all state and attach a frame to the input distributor.
  /// Throws DimensionError if the width differs from the configured row
  /// width or the frame is shorter than one block.
  void feed(const GrayImage& img);

  /// Advance one main clock and return what happened on it. On a drained
  /// pipeline returns a single idle event and does not advance time.
  std::vector<Event> step();
  std::vector<Event> step_n(std::uint64_t n);

  bool drained() const;
  std::uint64_t main_clock() const;
  std::uint64_t pipeline_clock() const;
  /// Value of the divider counter (the 7-bit counter for 512-pixel rows).
  int counter() const;
  /// Rows completely held by the input distributor or passed on.
  int rows_loaded() const;

  /// Snapshot of the trace so far; images are complete only once drained.
  SimTrace trace() const;

  /// feed + step until drained.
  SimTrace run(const GrayImage& img);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Pipeline build_pipeline(const PipelineConfig& cfg);

struct ReferenceOutputs {
  BinaryImage binarized;
  BinaryImage dilated;
  BinaryImage thinned;
};

/// The software path the pipeline must reproduce.
ReferenceOutputs reference_outputs(const GrayImage& img, const PipelineConfig& cfg = {});

struct PixelDiff {
  int x = 0;
  int y = 0;
};

struct EquivalenceReport {
  std::vector<PixelDiff> binarized;
  std::vector<PixelDiff> dilated;
  std::vector<PixelDiff> thinned;

  bool pass() const { return binarized.empty() && dilated.empty() && thinned.empty(); }
};

EquivalenceReport diff_outputs(const SimTrace& trace, const ReferenceOutputs& ref);
EquivalenceReport verify_against_reference(const GrayImage& img, const PipelineConfig& cfg = {});
/// Uses a caller-prepared pipeline, e.g. one with an injected fault.
EquivalenceReport verify_against_reference(Pipeline& pipeline, const GrayImage& img);

/// Published FPGA figures, echoed next to simulated counts for comparison.
struct PublishedFigures {
  double clock_hz = 79.4e6;
  double frame_seconds = 6.84e-3;
  double critical_path_ns = 6.29;
  int mvcu_count = 34;
};

struct TimingReport {
  std::uint64_t main_clocks = 0;
  std::uint64_t pipeline_clocks = 0;
  PhaseClocks phases;
  double clock_hz = 0;
  double seconds = 0;
  int mvcu_lanes = 0;
  PublishedFigures published;
};

/// Throws ConfigError unless clock_hz > 0.
TimingReport timing_report(const SimTrace& trace, double clock_hz);
std::string format_timing_report(const TimingReport& report);

}  // namespace fpbin::sim
