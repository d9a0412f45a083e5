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

#include "fpbin/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <stdexcept>

#include "fpbin/bitarith.hpp"

namespace fpbin::sim {

int PipelineConfig::counter_bits() const {
  return static_cast<int>(std::bit_width(static_cast<unsigned>(row_load_clocks() - 1)));
}

void PipelineConfig::validate() const {
  if (pixel_bits != 8) throw ConfigError("the MVCU datapath handles 8-bit pixels only");
  if (block_size != bitarith::kMvcuRowPixels) {
    throw ConfigError("the MVCU adder is built for 16x16 blocks; block_size must be 16");
  }
  if (overlap < 0 || overlap >= block_size) throw ConfigError("overlap must be in [0, block_size)");
  if (bus_width <= 0 || bus_width % pixel_bits != 0) {
    throw ConfigError("bus width must be a positive multiple of the pixel width");
  }
  if (row_width < block_size) throw ConfigError("row width must be at least one block");
  if (row_width % pixels_per_clock() != 0) {
    throw ConfigError("row width must be a multiple of the pixels loaded per clock");
  }
  if (row_width % bus_width != 0) {
    throw ConfigError("row width must be a multiple of the bus width for binary output");
  }
  if (thinning_superstages < 0) throw ConfigError("superstage count must be non-negative");
  if (clock_hz && !(*clock_hz > 0)) throw ConfigError("clock frequency must be positive");
}

namespace {

struct GrayRow {
  int y = 0;
  std::vector<std::uint8_t> px;
};

struct BitRow {
  int y = 0;
  bool last = false;
  std::vector<std::uint8_t> bits;
};

struct MvcuBank {
  int accumulating = -1;  // block row whose sums are in the MVCUs
  std::vector<bitarith::MvcuState> lanes;
  int latched = -1;       // block row whose means sit in the threshold registers
  std::vector<std::uint8_t> thresholds;
  std::vector<std::uint64_t> latch_ticks;
};

// Three-row window feeding one thinning processor circuit.
struct TpcStage {
  std::array<bool, 256> table{};
  std::vector<std::uint8_t> above;
  std::optional<BitRow> current;
  std::optional<BitRow> out;

  bool busy() const { return current.has_value() || out.has_value(); }
};

std::string unit_name(Unit unit, int index) {
  switch (unit) {
    case Unit::input: return "in";
    case Unit::clock: return "clk";
    case Unit::mvcu: return "mvcu" + std::to_string(index);
    case Unit::binarize: return "bin";
    case Unit::dilate: return "dil";
    case Unit::tpc: return "ss" + std::to_string(index / 2) + ".tpc" + std::to_string(index % 2 + 1);
    case Unit::output: return "out";
    case Unit::pipeline: return "sim";
  }
  return "?";
}

}  // namespace

std::string format_event(const Event& e) {
  std::string s = std::to_string(e.main_clock) + " " + unit_name(e.unit, e.index) + " ";
  const auto a = std::to_string(e.a);
  const auto b = std::to_string(e.b);
  switch (e.kind) {
    case EventKind::load_word: return s + "load row=" + a + " word=" + b;
    case EventKind::row_ready: return s + "row_ready row=" + a;
    case EventKind::tick: return s + "tick " + a;
    case EventKind::accumulate: return s + "accumulate block_row=" + a + " row=" + b;
    case EventKind::latch: return s + "latch block_row=" + a;
    case EventKind::emit:
      return e.unit == Unit::tpc ? s + "emit row=" + a + " deleted=" + b : s + "emit row=" + a;
    case EventKind::out_load: return s + "load row=" + a;
    case EventKind::out_word: return s + "word row=" + a + " word=" + b;
    case EventKind::out_done: return s + "done row=" + a;
    case EventKind::idle: return s + "idle";
  }
  return s;
}

void write_event_log(std::ostream& os, const std::vector<Event>& events) {
  for (const auto& e : events) os << format_event(e) << '\n';
}

struct Pipeline::Impl {
  PipelineConfig cfg;
  std::vector<int> lane_origins;
  std::vector<int> lane_owner;  // column -> lane
  std::vector<TpcStage> tpcs;   // 2 per superstage, TPC1 then TPC2
  bool record = false;

  // Frame.
  std::optional<GrayImage> frame;
  std::optional<BlockGrid> grid;
  int height = 0;

  // Clocks.
  std::uint64_t main_clock = 0;
  std::uint64_t pipeline_clock = 0;
  int counter = 0;

  // Input distributor.
  int loading_row = 0;
  std::optional<GrayRow> distributor_out;

  // Binarisation section.
  std::deque<GrayRow> row_buffer;
  std::vector<MvcuBank> banks;
  std::optional<BitRow> bin_out;
  std::size_t max_occupancy = 0;

  // Dilation.
  std::optional<BitRow> dil_pending;
  std::optional<BitRow> dil_out;

  // Output buffer.
  std::optional<BitRow> out_row;
  int words_sent = 0;

  SimTrace trace;

  explicit Impl(PipelineConfig c) : cfg(std::move(c)) {
    cfg.validate();
    lane_origins = block_origins(cfg.row_width, cfg.block_size, cfg.overlap);
    lane_owner.assign(static_cast<std::size_t>(cfg.row_width), 0);
    for (std::size_t l = lane_origins.size(); l-- > 0;) {
      for (int x = lane_origins[l]; x < lane_origins[l] + cfg.block_size; ++x) {
        lane_owner[static_cast<std::size_t>(x)] = static_cast<int>(l);
      }
    }
    const auto& lut = morphology::default_lut();
    tpcs.resize(static_cast<std::size_t>(2 * cfg.thinning_superstages));
    for (std::size_t i = 0; i < tpcs.size(); ++i) tpcs[i].table = (i % 2 == 0) ? lut.phase1 : lut.phase2;
  }

  void emit(std::vector<Event>* sink, Unit unit, int index, EventKind kind, std::int64_t a = 0,
            std::int64_t b = 0) {
    if (sink == nullptr) return;
    sink->push_back(Event{main_clock, unit, index, kind, a, b});
  }

  void reset_frame(const GrayImage& img) {
    if (img.width() != cfg.row_width) {
      throw DimensionError("frame width " + std::to_string(img.width()) + " does not match row width " +
                           std::to_string(cfg.row_width));
    }
    if (img.height() < cfg.block_size) {
      throw DimensionError("frame must have at least " + std::to_string(cfg.block_size) + " rows");
    }
    frame = img;
    height = img.height();
    grid.emplace(cfg.row_width, height, cfg.block_size, cfg.overlap);

    // One bank per block row that can be accumulating at the same time.
    int banks_needed = 1;
    for (int y = 0; y < height; ++y) {
      int cover = 0;
      for (int o : grid->y_origins()) cover += (o <= y && y < o + cfg.block_size) ? 1 : 0;
      banks_needed = std::max(banks_needed, cover);
    }
    banks.assign(static_cast<std::size_t>(banks_needed), MvcuBank{});
    for (auto& b : banks) {
      b.lanes.assign(lane_origins.size(), bitarith::MvcuState{});
      b.thresholds.assign(lane_origins.size(), 0);
    }

    main_clock = pipeline_clock = 0;
    counter = 0;
    loading_row = 0;
    distributor_out.reset();
    row_buffer.clear();
    bin_out.reset();
    max_occupancy = 0;
    dil_pending.reset();
    dil_out.reset();
    for (auto& t : tpcs) {
      t.above.assign(static_cast<std::size_t>(cfg.row_width), 0);
      t.current.reset();
      t.out.reset();
    }
    out_row.reset();
    words_sent = 0;

    trace = SimTrace{};
    trace.rows.assign(static_cast<std::size_t>(height), RowTiming{});
    trace.mvcu_lanes = static_cast<int>(lane_origins.size());
    trace.mvcu_banks = banks_needed;
    trace.thinning_stages = 6 * cfg.thinning_superstages;
    trace.binarized = BinaryImage(cfg.row_width, height);
    trace.dilated = BinaryImage(cfg.row_width, height);
    trace.thinned = BinaryImage(cfg.row_width, height);
  }

  bool input_active() const { return frame.has_value() && loading_row < height; }
  bool binarize_busy() const {
    if (!row_buffer.empty() || bin_out || distributor_out) return true;
    return std::any_of(banks.begin(), banks.end(), [](const MvcuBank& b) { return b.accumulating >= 0; });
  }
  bool dilate_busy() const { return dil_pending.has_value() || dil_out.has_value(); }
  bool thin_busy() const {
    return std::any_of(tpcs.begin(), tpcs.end(), [](const TpcStage& t) { return t.busy(); });
  }
  bool output_busy() const { return out_row.has_value(); }

  bool drained() const {
    if (!frame) return true;
    return !input_active() && !binarize_busy() && !dilate_busy() && !thin_busy() && !output_busy();
  }

  // ---- stage behaviour on a pipeline clock ----

  std::optional<BitRow> clock_binarize(std::optional<GrayRow> in, std::vector<Event>* sink) {
    if (in) {
      const int y = in->y;
      const auto& origins = grid->y_origins();
      // Starting block rows claim a bank before finishing ones release theirs.
      for (std::size_t k = origins.size(); k-- > 0;) {
        const int o = origins[k];
        if (y < o || y >= o + cfg.block_size) continue;
        auto bank = std::find_if(banks.begin(), banks.end(),
                                 [&](const MvcuBank& b) { return b.accumulating == static_cast<int>(k); });
        if (bank == banks.end()) {
          if (y != o) throw std::logic_error("block row joined mid-block");
          bank = std::find_if(banks.begin(), banks.end(), [](const MvcuBank& b) { return b.accumulating < 0; });
          if (bank == banks.end()) throw std::logic_error("no free MVCU bank");
          bank->accumulating = static_cast<int>(k);
        }
        const int bank_index = static_cast<int>(bank - banks.begin());
        std::span<const std::uint8_t> row(in->px);
        for (std::size_t l = 0; l < lane_origins.size(); ++l) {
          bank->lanes[l] = bitarith::mvcu_cycle(
              bank->lanes[l], row.subspan(static_cast<std::size_t>(lane_origins[l]),
                                          static_cast<std::size_t>(cfg.block_size)));
        }
        emit(sink, Unit::mvcu, bank_index, EventKind::accumulate, static_cast<std::int64_t>(k), y);

        if (y == o + cfg.block_size - 1) {
          const int previous = bank->latched;
          const bool still_needed = previous >= 0 &&
                                    std::any_of(row_buffer.begin(), row_buffer.end(), [&](const GrayRow& r) {
                                      return grid->owner_row(r.y) == previous;
                                    });
          if (still_needed) throw std::logic_error("threshold register overwritten before use");
          for (std::size_t l = 0; l < lane_origins.size(); ++l) {
            bank->thresholds[l] = static_cast<std::uint8_t>(bank->lanes[l].high_accum);
            bank->lanes[l] = bitarith::MvcuState{};
          }
          bank->latched = static_cast<int>(k);
          bank->accumulating = -1;
          bank->latch_ticks.push_back(pipeline_clock);
          emit(sink, Unit::mvcu, bank_index, EventKind::latch, static_cast<std::int64_t>(k));
        }
      }
      row_buffer.push_back(std::move(*in));
      max_occupancy = std::max(max_occupancy, row_buffer.size());
      if (row_buffer.size() > static_cast<std::size_t>(cfg.block_size)) {
        throw std::logic_error("binarisation row buffers overflowed");
      }
    }

    if (row_buffer.empty()) return std::nullopt;
    const GrayRow& head = row_buffer.front();
    const int owner = grid->owner_row(head.y);
    auto bank = std::find_if(banks.begin(), banks.end(), [&](const MvcuBank& b) { return b.latched == owner; });
    if (bank == banks.end()) return std::nullopt;

    BitRow out{head.y, head.y == height - 1, std::vector<std::uint8_t>(head.px.size())};
    for (std::size_t x = 0; x < head.px.size(); ++x) {
      const bool above = head.px[x] > bank->thresholds[static_cast<std::size_t>(lane_owner[x])];
      out.bits[x] = (cfg.polarity == Polarity::light_foreground ? above : !above) ? 1 : 0;
    }
    row_buffer.pop_front();
    emit(sink, Unit::binarize, 0, EventKind::emit, out.y);
    return out;
  }

  // out(x) = cur(x) | cur(x+1) | next(x) | next(x+1)
  static BitRow dilate_rows(const BitRow& cur, std::span<const std::uint8_t> next, bool last) {
    BitRow out{cur.y, last, std::vector<std::uint8_t>(cur.bits.size())};
    const std::size_t w = cur.bits.size();
    for (std::size_t x = 0; x < w; ++x) {
      std::uint8_t v = cur.bits[x] | next[x];
      if (x + 1 < w) v |= cur.bits[x + 1] | next[x + 1];
      out.bits[x] = v;
    }
    return out;
  }

  std::optional<BitRow> clock_dilate(std::optional<BitRow> in, std::vector<Event>* sink) {
    std::optional<BitRow> out;
    if (in) {
      if (dil_pending) out = dilate_rows(*dil_pending, in->bits, false);
      dil_pending = std::move(in);
    } else if (dil_pending && dil_pending->last) {
      const std::vector<std::uint8_t> zeros(dil_pending->bits.size(), 0);
      out = dilate_rows(*dil_pending, zeros, true);
      dil_pending.reset();
    }
    if (out) emit(sink, Unit::dilate, 0, EventKind::emit, out->y);
    return out;
  }

  static BitRow tpc_rows(const TpcStage& stage, std::span<const std::uint8_t> above, const BitRow& cur,
                         std::span<const std::uint8_t> below, bool last, std::size_t& deleted) {
    BitRow out{cur.y, last, cur.bits};
    const std::size_t w = cur.bits.size();
    auto at = [w](std::span<const std::uint8_t> r, std::size_t x, int dx) -> unsigned {
      if (dx < 0 && x == 0) return 0;
      if (dx > 0 && x + 1 >= w) return 0;
      return r[x + static_cast<std::size_t>(dx)];
    };
    std::span<const std::uint8_t> here(cur.bits);
    for (std::size_t x = 0; x < w; ++x) {
      if (!here[x]) continue;
      const unsigned code = at(above, x, 0) | (at(above, x, 1) << 1) | (at(here, x, 1) << 2) |
                            (at(below, x, 1) << 3) | (at(below, x, 0) << 4) | (at(below, x, -1) << 5) |
                            (at(here, x, -1) << 6) | (at(above, x, -1) << 7);
      if (stage.table[code]) {
        out.bits[x] = 0;
        ++deleted;
      }
    }
    return out;
  }

  std::optional<BitRow> clock_tpc(std::size_t index, std::optional<BitRow> in, std::vector<Event>* sink) {
    TpcStage& stage = tpcs[index];
    std::optional<BitRow> out;
    std::size_t deleted = 0;
    if (in) {
      if (stage.current) {
        out = tpc_rows(stage, stage.above, *stage.current, in->bits, false, deleted);
        stage.above = std::move(stage.current->bits);
      }
      stage.current = std::move(in);
    } else if (stage.current && stage.current->last) {
      const std::vector<std::uint8_t> zeros(stage.current->bits.size(), 0);
      out = tpc_rows(stage, stage.above, *stage.current, zeros, true, deleted);
      stage.current.reset();
      stage.above.assign(static_cast<std::size_t>(cfg.row_width), 0);
    }
    if (out) {
      emit(sink, Unit::tpc, static_cast<int>(index), EventKind::emit, out->y,
           static_cast<std::int64_t>(deleted));
    }
    return out;
  }

  static void store_row(BinaryImage& img, const BitRow& row) {
    std::copy(row.bits.begin(), row.bits.end(), img.row(row.y).begin());
  }

  void pipeline_tick(std::vector<Event>* sink) {
    ++pipeline_clock;
    emit(sink, Unit::clock, 0, EventKind::tick, static_cast<std::int64_t>(pipeline_clock));

    // Downstream first, so every stage consumes what its predecessor held
    // before this edge.
    std::optional<BitRow> to_output = tpcs.empty() ? std::move(dil_out) : std::move(tpcs.back().out);
    if (to_output) {
      if (out_row) throw std::logic_error("output buffer still draining at pipeline clock");
      store_row(trace.thinned, *to_output);
      emit(sink, Unit::output, 0, EventKind::out_load, to_output->y);
      out_row = std::move(to_output);
      words_sent = 0;
    }
    for (std::size_t i = tpcs.size(); i-- > 0;) {
      std::optional<BitRow> in = i == 0 ? std::move(dil_out) : std::move(tpcs[i - 1].out);
      tpcs[i].out = clock_tpc(i, std::move(in), sink);
    }

    dil_out = clock_dilate(std::move(bin_out), sink);
    if (dil_out) store_row(trace.dilated, *dil_out);

    bin_out = clock_binarize(std::move(distributor_out), sink);
    distributor_out.reset();
    if (bin_out) store_row(trace.binarized, *bin_out);
  }

  void advance(std::vector<Event>* sink) {
    if (drained()) {
      emit(sink, Unit::pipeline, 0, EventKind::idle);
      return;
    }

    if (input_active()) {
      ++trace.phases.input;
    } else if (binarize_busy()) {
      ++trace.phases.binarize;
    } else if (dilate_busy()) {
      ++trace.phases.dilate;
    } else if (thin_busy()) {
      ++trace.phases.thin;
    } else {
      ++trace.phases.output;
    }

    // Input bus: pixels_per_clock registers loaded per main clock.
    if (input_active()) {
      const int word = counter;
      auto& timing = trace.rows[static_cast<std::size_t>(loading_row)];
      if (word == 0) timing.load_first = static_cast<std::int64_t>(main_clock);
      ++trace.input_bus_clocks;
      emit(sink, Unit::input, 0, EventKind::load_word, loading_row, word);
      if (word == cfg.row_load_clocks() - 1) {
        timing.load_last = static_cast<std::int64_t>(main_clock);
        auto src = frame->row(loading_row);
        distributor_out = GrayRow{loading_row, std::vector<std::uint8_t>(src.begin(), src.end())};
        emit(sink, Unit::input, 0, EventKind::row_ready, loading_row);
        ++loading_row;
      }
    }

    // Output bus: one bus-width group of one-bit buffers per main clock.
    if (out_row) {
      auto& timing = trace.rows[static_cast<std::size_t>(out_row->y)];
      if (words_sent == 0) timing.out_first = static_cast<std::int64_t>(main_clock);
      ++trace.output_bus_clocks;
      emit(sink, Unit::output, 0, EventKind::out_word, out_row->y, words_sent);
      if (++words_sent == cfg.output_clocks_per_row()) {
        timing.out_last = static_cast<std::int64_t>(main_clock);
        emit(sink, Unit::output, 0, EventKind::out_done, out_row->y);
        out_row.reset();
      }
    }

    if (++counter == cfg.row_load_clocks()) {
      counter = 0;
      pipeline_tick(sink);
    }
    ++main_clock;
  }

  SimTrace snapshot() const {
    SimTrace t = trace;
    t.main_clocks = main_clock;
    t.pipeline_clocks = pipeline_clock;
    t.max_row_buffer_occupancy = max_occupancy;
    t.latch_ticks.clear();
    for (const auto& b : banks) t.latch_ticks.push_back(b.latch_ticks);
    return t;
  }
};

Pipeline::Pipeline(PipelineConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {}
Pipeline::~Pipeline() = default;
Pipeline::Pipeline(Pipeline&&) noexcept = default;
Pipeline& Pipeline::operator=(Pipeline&&) noexcept = default;

const PipelineConfig& Pipeline::config() const { return impl_->cfg; }
int Pipeline::mvcu_lanes() const { return static_cast<int>(impl_->lane_origins.size()); }
int Pipeline::thinning_stage_count() const { return 6 * impl_->cfg.thinning_superstages; }
void Pipeline::set_record_events(bool on) { impl_->record = on; }

void Pipeline::inject_lut_fault(int superstage, morphology::Phase phase, morphology::NeighborCode code) {
  if (superstage < 0 || superstage >= impl_->cfg.thinning_superstages) {
    throw ConfigError("no such superstage: " + std::to_string(superstage));
  }
  auto& stage = impl_->tpcs[static_cast<std::size_t>(2 * superstage + (phase == morphology::Phase::first ? 0 : 1))];
  stage.table[code] = !stage.table[code];
}

void Pipeline::feed(const GrayImage& img) { impl_->reset_frame(img); }

std::vector<Event> Pipeline::step() {
  std::vector<Event> events;
  impl_->advance(&events);
  if (impl_->record) impl_->trace.events.insert(impl_->trace.events.end(), events.begin(), events.end());
  return events;
}

std::vector<Event> Pipeline::step_n(std::uint64_t n) {
  std::vector<Event> events;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto before = events.size();
    impl_->advance(&events);
    if (impl_->record) {
      impl_->trace.events.insert(impl_->trace.events.end(), events.begin() + static_cast<std::ptrdiff_t>(before),
                                 events.end());
    }
  }
  return events;
}

bool Pipeline::drained() const { return impl_->drained(); }
std::uint64_t Pipeline::main_clock() const { return impl_->main_clock; }
std::uint64_t Pipeline::pipeline_clock() const { return impl_->pipeline_clock; }
int Pipeline::counter() const { return impl_->counter; }
int Pipeline::rows_loaded() const { return impl_->loading_row; }
SimTrace Pipeline::trace() const { return impl_->snapshot(); }

SimTrace Pipeline::run(const GrayImage& img) {
  feed(img);
  auto* sink = impl_->record ? &impl_->trace.events : nullptr;
  while (!impl_->drained()) impl_->advance(sink);
  return trace();
}

Pipeline build_pipeline(const PipelineConfig& cfg) { return Pipeline(cfg); }

}  // namespace fpbin::sim
