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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fpbin/binarize.hpp"
#include "fpbin/bitarith.hpp"
#include "fpbin/morphology.hpp"
#include "fpbin/pipeline.hpp"

namespace {

fpbin::GrayImage noise_frame(int w, int h) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> px(0, 255);
  fpbin::GrayImage img(w, h);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(px(rng));
  return img;
}

fpbin::BinaryImage binarized_frame(int side) {
  const auto img = noise_frame(side, side);
  return fpbin::binarize(img, fpbin::threshold_map(img, fpbin::build_block_grid(side, side, 16, 1)));
}

void BM_Binarize(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto img = noise_frame(side, side);
  const auto grid = fpbin::build_block_grid(side, side, 16, 1);
  for (auto _ : state) benchmark::DoNotOptimize(fpbin::binarize(img, fpbin::threshold_map(img, grid)));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_Binarize)->Arg(256)->Arg(512);

void BM_Thin(benchmark::State& state) {
  const auto img = fpbin::morphology::dilate_2x2(binarized_frame(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(fpbin::morphology::thin(img, 6));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}
BENCHMARK(BM_Thin)->Arg(256)->Arg(512);

void BM_Dilate(benchmark::State& state) {
  const auto img = binarized_frame(512);
  for (auto _ : state) benchmark::DoNotOptimize(fpbin::morphology::dilate_2x2(img));
}
BENCHMARK(BM_Dilate);

void BM_MvcuMean(benchmark::State& state) {
  std::vector<std::uint8_t> block(256);
  std::mt19937 rng(2);
  for (auto& b : block) b = static_cast<std::uint8_t>(rng());
  for (auto _ : state) benchmark::DoNotOptimize(fpbin::bitarith::mvcu_mean(block));
}
BENCHMARK(BM_MvcuMean);

void BM_PipelineFrame(benchmark::State& state) {
  const auto img = noise_frame(512, 512);
  for (auto _ : state) {
    fpbin::sim::Pipeline p;
    benchmark::DoNotOptimize(p.run(img));
  }
}
BENCHMARK(BM_PipelineFrame)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
