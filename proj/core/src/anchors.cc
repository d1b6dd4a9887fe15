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

#include "stereoqa/anchors.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

#include "stereoqa/error.h"

namespace stereoqa {
namespace {

// Transition band is cutoff +- 20 %, inside the required 0.8x..1.5x corridor.
constexpr double kTransitionFraction = 0.4;
constexpr double kStopbandAttenuationDb = 70.0;

}  // namespace

std::vector<double> DesignLowpassFir(double cutoff_hz, int sample_rate_hz) {
  const double nyquist = sample_rate_hz / 2.0;
  if (!(cutoff_hz > 0.0) || cutoff_hz * (1.0 + kTransitionFraction / 2) >= nyquist) {
    throw DomainError("lowpass cutoff " + std::to_string(cutoff_hz) +
                      " Hz is not below Nyquist");
  }
  // Kaiser design formulas for the window shape and length.
  const double a = kStopbandAttenuationDb;
  const double beta = 0.1102 * (a - 8.7);
  const double transition_rad =
      2.0 * std::numbers::pi * kTransitionFraction * cutoff_hz / sample_rate_hz;
  auto taps = static_cast<std::size_t>(
      std::ceil((a - 8.0) / (2.285 * transition_rad))) + 1;
  if (taps % 2 == 0) ++taps;

  const double fc = cutoff_hz / sample_rate_hz;  // cycles per sample
  const double center = static_cast<double>(taps - 1) / 2.0;
  const double i0_beta = std::cyl_bessel_i(0.0, beta);
  std::vector<double> h(taps);
  for (std::size_t i = 0; i < taps; ++i) {
    const double m = static_cast<double>(i) - center;
    const double sinc =
        m == 0.0 ? 2.0 * fc
                 : std::sin(2.0 * std::numbers::pi * fc * m) / (std::numbers::pi * m);
    const double ratio = m / center;
    const double kaiser =
        std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - ratio * ratio)) / i0_beta;
    h[i] = sinc * kaiser;
  }
  const double dc = std::accumulate(h.begin(), h.end(), 0.0);
  for (double& v : h) v /= dc;
  return h;
}

AudioBuffer LowpassAnchor(const AudioBuffer& buffer, double cutoff_hz) {
  const auto h = DesignLowpassFir(cutoff_hz, buffer.sample_rate_hz());
  const auto delay = static_cast<std::ptrdiff_t>(h.size() / 2);
  const auto length = static_cast<std::ptrdiff_t>(buffer.num_samples());
  std::vector<std::vector<double>> out;
  for (std::size_t c = 0; c < buffer.num_channels(); ++c) {
    const auto x = buffer.channel(c);
    std::vector<double> y(x.size(), 0.0);
    // y[n] = sum_k h[k] x[n + delay - k], zero outside the signal.
    for (std::ptrdiff_t n = 0; n < length; ++n) {
      const std::ptrdiff_t k_lo = std::max<std::ptrdiff_t>(0, n + delay - length + 1);
      const std::ptrdiff_t k_hi =
          std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(h.size()) - 1, n + delay);
      double acc = 0.0;
      for (std::ptrdiff_t k = k_lo; k <= k_hi; ++k) {
        acc += h[k] * x[n + delay - k];
      }
      y[n] = acc;
    }
    out.push_back(std::move(y));
  }
  return AudioBuffer(buffer.sample_rate_hz(), std::move(out),
                     buffer.full_scale_spl_db());
}

AudioBuffer MonoAnchor(const AudioBuffer& buffer) {
  RequireStereo(buffer, "mono anchor");
  const auto left = buffer.channel(0);
  const auto right = buffer.channel(1);
  std::vector<double> mono(left.size());
  for (std::size_t i = 0; i < mono.size(); ++i) {
    mono[i] = (left[i] + right[i]) / 2.0;
  }
  std::vector<std::vector<double>> channels{mono, mono};
  return AudioBuffer(buffer.sample_rate_hz(), std::move(channels),
                     buffer.full_scale_spl_db());
}

}  // namespace stereoqa
