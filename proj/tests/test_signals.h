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

#ifndef STEREOQA_TESTS_TEST_SIGNALS_H_
#define STEREOQA_TESTS_TEST_SIGNALS_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "stereoqa/audio_buffer.h"
#include "stereoqa/rng.h"

namespace stereoqa::testing {

inline constexpr int kRate = 48000;

inline std::vector<double> WhiteNoise(std::size_t n, double level, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = level * rng.Gaussian();
  return out;
}

inline std::vector<double> Sine(std::size_t n, double hz, double amplitude,
                                int rate = kRate, double phase = 0.0) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = amplitude * std::sin(2.0 * std::numbers::pi * hz * i / rate + phase);
  }
  return out;
}

// Harmonic tone with a slow amplitude modulation, roughly music-like.
inline std::vector<double> HarmonicTone(std::size_t n, double f0, double amplitude,
                                        int rate = kRate) {
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    double s = 0.0;
    for (int k = 1; k <= 12 && k * f0 < rate / 2.5; ++k) {
      s += std::sin(2.0 * std::numbers::pi * k * f0 * t) / k;
    }
    out[i] = amplitude * (0.6 + 0.4 * std::sin(2.0 * std::numbers::pi * 3.0 * t)) * s;
  }
  return out;
}

inline AudioBuffer Stereo(std::vector<double> left, std::vector<double> right,
                          int rate = kRate) {
  return AudioBuffer(rate, {std::move(left), std::move(right)});
}

inline AudioBuffer Mono(std::vector<double> samples, int rate = kRate) {
  return AudioBuffer(rate, {std::move(samples)});
}

inline double Rms(const std::vector<double>& x) {
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return x.empty() ? 0.0 : std::sqrt(sum / x.size());
}

inline std::vector<double> Copy(std::span<const double> x) { return {x.begin(), x.end()}; }

}  // namespace stereoqa::testing

#endif  // STEREOQA_TESTS_TEST_SIGNALS_H_
