// Copyright 2026 The StereoQA Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "stereoqa/audio_buffer.h"
#include "stereoqa/binaural.h"
#include "stereoqa/degrade.h"
#include "stereoqa/fusion.h"
#include "stereoqa/nmr.h"
#include "stereoqa/rng.h"
#include "stereoqa/stft.h"

namespace stereoqa {
namespace {

constexpr int kRate = 48000;

std::vector<double> Noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = 0.1 * rng.Gaussian();
  return x;
}

AudioBuffer NoisyStereo(double seconds) {
  const auto n = static_cast<std::size_t>(seconds * kRate);
  return AudioBuffer(kRate, {Noise(n, 1), Noise(n, 2)});
}

void BM_StftRoundtrip(benchmark::State& state) {
  const std::vector<double> x = Noise(static_cast<std::size_t>(state.range(0)) * kRate, 3);
  for (auto _ : state) benchmark::DoNotOptimize(Istft(Stft(x, kRate)));
  state.SetItemsProcessed(state.iterations() * x.size());
}
BENCHMARK(BM_StftRoundtrip)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Nmr(benchmark::State& state) {
  const AudioBuffer ref = NoisyStereo(static_cast<double>(state.range(0)));
  const AudioBuffer test = ref.Scaled(0.9);
  for (auto _ : state) benchmark::DoNotOptimize(ComputeNmr(ref, test).mean_nmr_db);
}
BENCHMARK(BM_Nmr)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ExtractCues(benchmark::State& state) {
  const AudioBuffer in = NoisyStereo(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ExtractCues(in).num_frames());
}
BENCHMARK(BM_ExtractCues)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_QuantizationNoise(benchmark::State& state) {
  const std::vector<double> x = Noise(static_cast<std::size_t>(state.range(0)) * kRate, 4);
  for (auto _ : state) benchmark::DoNotOptimize(ApplyQuantizationNoise(x, kRate, 6.0, 5));
}
BENCHMARK(BM_QuantizationNoise)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_SpectralHoles(benchmark::State& state) {
  const std::vector<double> x = Noise(kRate, 6);
  SpectralHoleOptions options;
  options.solver_iterations = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ApplySpectralHoles(x, kRate, 0.3, 4, 7, options));
}
BENCHMARK(BM_SpectralHoles)->Arg(60)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_FitRegression(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  Rng rng(8);
  FeatureMatrix features;
  features.rows = rows;
  features.cols = 4;
  std::vector<double> target;
  for (std::size_t r = 0; r < rows; ++r) {
    double y = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
      features.values.push_back(rng.Uniform());
      y += std::max(0.0, features.values.back() - 0.3 * c);
    }
    target.push_back(y);
  }
  for (auto _ : state) benchmark::DoNotOptimize(FitRegression(features, target).terms.size());
}
BENCHMARK(BM_FitRegression)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace stereoqa

BENCHMARK_MAIN();
