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

#include "cli/cli.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "fpbin/binarize.hpp"
#include "fpbin/morphology.hpp"
#include "fpbin/pipeline.hpp"
#include "fpbin/pnm.hpp"

namespace fpbin::cli {

namespace {

namespace fs = std::filesystem;

// Raised for unreadable input or unwritable output; maps to kExitIo.
struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v, int decimals = 6) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string crc32_hex(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, bytes.data(), static_cast<uInt>(bytes.size()));
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

const std::map<std::string, Polarity> kPolarities{{"dark", Polarity::dark_foreground},
                                                  {"light", Polarity::light_foreground}};
const std::map<std::string, FactorMode> kFactorModes{{"mul", FactorMode::multiply},
                                                     {"div", FactorMode::divide}};

std::string polarity_name(Polarity p) { return p == Polarity::dark_foreground ? "dark" : "light"; }
std::string mode_name(FactorMode m) { return m == FactorMode::multiply ? "mul" : "div"; }

GrayImage load_input(const std::string& path, Bytes* raw = nullptr) {
  Bytes bytes;
  try {
    bytes = read_file(path);
  } catch (const std::exception& e) {
    throw IoFailure(e.what());
  }
  try {
    auto img = load_pgm(bytes);
    if (raw) *raw = std::move(bytes);
    return img;
  } catch (const DecodeError& e) {
    throw IoFailure(path + ": " + e.what());
  }
}

// Writes every file or none: on failure the ones already written are removed.
void write_all(const std::vector<std::pair<std::string, Bytes>>& files) {
  std::vector<std::string> written;
  try {
    for (const auto& [path, bytes] : files) {
      write_file(path, bytes);
      written.push_back(path);
    }
  } catch (const std::exception& e) {
    std::error_code ignored;
    for (const auto& p : written) fs::remove(p, ignored);
    throw IoFailure(e.what());
  }
}

struct ChainOptions {
  int block_size = 16;
  int overlap = 1;
  Polarity polarity = Polarity::dark_foreground;
  int iterations = morphology::kDefaultIterations;
  FactorMode factor_mode = FactorMode::multiply;
};

void add_chain_options(CLI::App* cmd, ChainOptions& o) {
  cmd->add_option("--block-size", o.block_size, "Thresholding block side in pixels")->check(CLI::Range(2, 1 << 16));
  cmd->add_option("--overlap", o.overlap, "Pixels shared by adjacent blocks")->check(CLI::NonNegativeNumber);
  cmd->add_option("--polarity", o.polarity, "Which side of the threshold is foreground")
      ->transform(CLI::CheckedTransformer(kPolarities));
  cmd->add_option("--iterations", o.iterations, "Thinning iterations")->check(CLI::NonNegativeNumber);
  cmd->add_option("--factor-mode", o.factor_mode, "Block factor form: sigma2*N^(1/4) or sigma2/N^(1/4)")
      ->transform(CLI::CheckedTransformer(kFactorModes));
}

void check_chain(const ChainOptions& o, const GrayImage& img) {
  if (o.overlap >= o.block_size) throw CLI::ValidationError("--overlap", "must be smaller than --block-size");
  if (img.width() < o.block_size || img.height() < o.block_size) {
    throw CLI::ValidationError("--block-size", "larger than the input image");
  }
}

// ---------------------------------------------------------------- process

struct ProcessArgs {
  std::string input;
  ChainOptions chain;
  std::string out_binarized, out_dilated, out_thinned, manifest;
  bool simulate = false;
};

int cmd_process(const ProcessArgs& a, std::ostream& out) {
  Bytes raw;
  const auto img = load_input(a.input, &raw);
  check_chain(a.chain, img);

  const auto grid = build_block_grid(img.width(), img.height(), a.chain.block_size, a.chain.overlap);
  const auto binarized = binarize(img, threshold_map(img, grid), a.chain.polarity);
  const auto dilated = morphology::dilate_2x2(binarized);
  const auto thinning = morphology::thin(dilated, a.chain.iterations);

  const auto otsu = binarize_global(img, otsu_threshold(histogram(img)), a.chain.polarity);
  const auto quality = compare(otsu, binarized);

  std::ostringstream m;
  m << "fpbin-manifest 1\n"
    << "input " << a.input << " crc32=" << crc32_hex(raw) << '\n'
    << "size " << img.width() << 'x' << img.height() << '\n'
    << "block_size " << a.chain.block_size << '\n'
    << "overlap " << a.chain.overlap << '\n'
    << "polarity " << polarity_name(a.chain.polarity) << '\n'
    << "iterations " << a.chain.iterations << '\n'
    << "factor_mode " << mode_name(a.chain.factor_mode) << '\n';

  std::vector<int> usable;
  for (int n : kDefaultBlockCandidates) {
    if (n <= img.width() && n <= img.height()) usable.push_back(n);
  }
  if (!usable.empty()) {
    m << "block_factor_selected " << select_block_size(img, usable, a.chain.factor_mode).selected << '\n';
  }
  m << "vs_otsu.snr_ms " << num(quality.snr_ms) << '\n'
    << "vs_otsu.e_rms " << num(quality.e_rms) << '\n'
    << "vs_otsu.correlation " << (quality.correlation ? num(*quality.correlation) : "undefined") << '\n';
  m << "thinning.deleted";
  for (auto c : thinning.changed_per_iteration) m << ' ' << c;
  m << '\n';

  if (a.simulate) {
    sim::PipelineConfig cfg;
    cfg.row_width = img.width();
    cfg.block_size = a.chain.block_size;
    cfg.overlap = a.chain.overlap;
    cfg.polarity = a.chain.polarity;
    cfg.thinning_superstages = a.chain.iterations;
    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      throw CLI::ValidationError("--simulate", e.what());
    }
    sim::Pipeline pipeline(cfg);
    const auto trace = pipeline.run(img);
    const auto report = sim::diff_outputs(trace, {binarized, dilated, thinning.image});
    m << "sim.main_clocks " << trace.main_clocks << '\n'
      << "sim.pipeline_clocks " << trace.pipeline_clocks << '\n'
      << "sim.input_bus_clocks " << trace.input_bus_clocks << '\n'
      << "sim.output_bus_clocks " << trace.output_bus_clocks << '\n'
      << "sim.equivalence " << (report.pass() ? "PASS" : "FAIL") << '\n';
  }

  std::vector<std::pair<std::string, Bytes>> files;
  if (!a.out_binarized.empty()) files.emplace_back(a.out_binarized, save_pbm(binarized));
  if (!a.out_dilated.empty()) files.emplace_back(a.out_dilated, save_pbm(dilated));
  if (!a.out_thinned.empty()) files.emplace_back(a.out_thinned, save_pbm(thinning.image));
  const char* tap_names[] = {"binarized", "dilated", "thinned"};
  const std::string* tap_paths[] = {&a.out_binarized, &a.out_dilated, &a.out_thinned};
  std::size_t next = 0;
  for (int t = 0; t < 3; ++t) {
    if (tap_paths[t]->empty()) continue;
    m << "output " << tap_names[t] << ' ' << *tap_paths[t] << " crc32=" << crc32_hex(files[next++].second) << '\n';
  }

  const auto manifest = m.str();
  std::string manifest_path = a.manifest;
  if (manifest_path.empty() && !files.empty()) manifest_path = files.front().first + ".manifest.txt";
  if (manifest_path.empty()) {
    out << manifest;
  } else {
    files.emplace_back(manifest_path, Bytes(manifest.begin(), manifest.end()));
  }
  write_all(files);
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string input;
  ChainOptions chain;
  int row_width = 512;
  double clock_mhz = 79.4;
  std::string trace_path;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto img = load_input(a.input);
  if (img.width() != a.row_width) {
    throw IoFailure("input width " + std::to_string(img.width()) + " does not match row width " +
                    std::to_string(a.row_width));
  }
  sim::PipelineConfig cfg;
  cfg.row_width = a.row_width;
  cfg.block_size = a.chain.block_size;
  cfg.overlap = a.chain.overlap;
  cfg.polarity = a.chain.polarity;
  cfg.thinning_superstages = a.chain.iterations;
  cfg.clock_hz = a.clock_mhz * 1e6;
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw CLI::ValidationError("simulate", e.what());
  }
  if (img.height() < cfg.block_size) throw IoFailure("input has fewer rows than one block");

  sim::Pipeline pipeline(cfg);
  pipeline.set_record_events(!a.trace_path.empty());
  const auto trace = pipeline.run(img);
  const auto report = sim::diff_outputs(trace, sim::reference_outputs(img, cfg));

  if (!a.trace_path.empty()) {
    std::ostringstream log;
    sim::write_event_log(log, trace.events);
    const auto text = log.str();
    write_all({{a.trace_path, Bytes(text.begin(), text.end())}});
  }

  const auto rows = static_cast<std::uint64_t>(img.height());
  out << "rows " << rows << '\n'
      << "row_load_clocks " << cfg.row_load_clocks() << '\n'
      << "row_output_clocks " << cfg.output_clocks_per_row() << '\n'
      << "input_bus_clocks " << trace.input_bus_clocks << '\n'
      << "output_bus_clocks " << trace.output_bus_clocks << '\n'
      << "thinning_stages " << trace.thinning_stages << '\n'
      << "mvcu_banks " << trace.mvcu_banks << '\n'
      << sim::format_timing_report(sim::timing_report(trace, *cfg.clock_hz))
      << "diff.binarized " << report.binarized.size() << '\n'
      << "diff.dilated " << report.dilated.size() << '\n'
      << "diff.thinned " << report.thinned.size() << '\n'
      << "equivalence " << (report.pass() ? "PASS" : "FAIL") << '\n';
  return report.pass() ? kExitOk : kExitMismatch;
}

// ---------------------------------------------------------------- blocksize

struct BlocksizeArgs {
  std::string input;
  FactorMode mode = FactorMode::multiply;
  std::vector<int> candidates{kDefaultBlockCandidates.begin(), kDefaultBlockCandidates.end()};
};

int cmd_blocksize(const BlocksizeArgs& a, std::ostream& out, std::ostream& err) {
  const auto img = load_input(a.input);
  std::vector<int> usable;
  for (int n : a.candidates) {
    if (n > img.width() || n > img.height()) {
      err << "warning: skipping block size " << n << ": larger than the " << img.width() << 'x'
          << img.height() << " image\n";
    } else {
      usable.push_back(n);
    }
  }
  if (usable.empty()) throw CLI::ValidationError("--candidates", "no candidate fits the image");

  const auto report = select_block_size(img, usable, a.mode);
  out << "N sigma2 factor_mul factor_div\n";
  for (const auto& c : report.candidates) {
    out << c.block_size << ' ' << num(c.sigma2, 4) << ' ' << num(c.factor_mul, 4) << ' '
        << num(c.factor_div, 4) << '\n';
  }
  out << "mode " << mode_name(report.mode) << '\n' << "selected " << report.selected << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- metrics

struct MetricsArgs {
  std::string input;
  ChainOptions chain;
  std::string reference = "otsu";
};

int cmd_metrics(const MetricsArgs& a, std::ostream& out) {
  const auto img = load_input(a.input);
  check_chain(a.chain, img);

  std::vector<std::pair<int, int>> configs{{16, 0}, {16, 1}};
  if (std::find(configs.begin(), configs.end(), std::pair{a.chain.block_size, a.chain.overlap}) == configs.end()) {
    configs.emplace_back(a.chain.block_size, a.chain.overlap);
  }

  const auto otsu_t = otsu_threshold(histogram(img));
  out << "otsu_threshold " << static_cast<int>(otsu_t) << '\n'
      << "reference " << a.reference << '\n'
      << "block overlap snr_ms e_rms correlation\n";
  for (const auto& [n, ov] : configs) {
    if (n > img.width() || n > img.height()) continue;
    const auto grid = build_block_grid(img.width(), img.height(), n, ov);
    const auto adaptive = binarize(img, threshold_map(img, grid), a.chain.polarity);
    const auto g = a.reference == "otsu" ? binarize_global(img, otsu_t, a.chain.polarity) : adaptive;
    const auto q = compare(g, adaptive);
    out << n << ' ' << ov << ' ' << num(q.snr_ms) << ' ' << num(q.e_rms) << ' '
        << (q.correlation ? num(*q.correlation) : "undefined") << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fingerprint binarisation, dilation and thinning with a pipeline simulator", "fpbin"};
  app.require_subcommand(1);

  ProcessArgs process;
  auto* p = app.add_subcommand("process", "Binarise, dilate and thin a PGM image");
  p->add_option("input", process.input, "Input PGM (P5)")->required();
  add_chain_options(p, process.chain);
  p->add_option("--out-binarized", process.out_binarized, "Write the binarised image (PBM)");
  p->add_option("--out-dilated", process.out_dilated, "Write the dilated image (PBM)");
  p->add_option("--out-thinned", process.out_thinned, "Write the thinned image (PBM)");
  p->add_option("--manifest", process.manifest, "Manifest path (default: <first output>.manifest.txt)");
  p->add_flag("--simulate", process.simulate, "Also run the pipeline simulator and record its cycle counts");

  SimulateArgs simulate;
  auto* s = app.add_subcommand("simulate", "Run the cycle-level pipeline simulator");
  s->add_option("input", simulate.input, "Input PGM (P5)")->required();
  add_chain_options(s, simulate.chain);
  s->add_option("--row-width", simulate.row_width, "Pixels per image row")->check(CLI::PositiveNumber);
  s->add_option("--clock-mhz", simulate.clock_mhz, "Main clock for the wall-time estimate")
      ->check(CLI::PositiveNumber);
  s->add_option("--trace", simulate.trace_path, "Write the event log");

  BlocksizeArgs blocksize;
  auto* b = app.add_subcommand("blocksize", "Block factor for candidate block sizes");
  b->add_option("input", blocksize.input, "Input PGM (P5)")->required();
  b->add_option("--factor-mode", blocksize.mode, "Block factor form used for selection")
      ->transform(CLI::CheckedTransformer(kFactorModes));
  b->add_option("--candidates", blocksize.candidates, "Block sizes to evaluate")->delimiter(',');

  MetricsArgs metrics;
  auto* m = app.add_subcommand("metrics", "Compare adaptive binarisation with a reference");
  m->add_option("input", metrics.input, "Input PGM (P5)")->required();
  add_chain_options(m, metrics.chain);
  m->add_option("--reference", metrics.reference, "Reference binarisation")
      ->check(CLI::IsMember({"otsu", "adaptive"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (p->parsed()) return cmd_process(process, out);
    if (s->parsed()) return cmd_simulate(simulate, out);
    if (b->parsed()) return cmd_blocksize(blocksize, out, err);
    return cmd_metrics(metrics, out);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  } catch (const IoFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace fpbin::cli
