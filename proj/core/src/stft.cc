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

#include "stereoqa/stft.h"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "stereoqa/error.h"
#include "stereoqa/fft.h"

namespace stereoqa {

std::vector<double> HannWindow(std::size_t length) {
  std::vector<double> window(length);
  for (std::size_t i = 0; i < length; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                     static_cast<double>(i) /
                                     static_cast<double>(length));
  }
  return window;
}

void ValidateStftParams(const StftParams& params) {
  if (params.window_length < 4 || !std::has_single_bit(params.window_length)) {
    throw ConfigError("STFT window length must be a power of two >= 4, got " +
                      std::to_string(params.window_length));
  }
  if (params.hop == 0 || params.hop > params.window_length) {
    throw ConfigError("STFT hop must be in (0, window_length]");
  }
}

Spectrogram::Spectrogram(std::size_t num_frames, const StftParams& params,
                         int sample_rate_hz, std::size_t signal_length)
    : num_frames_(num_frames),
      params_(params),
      sample_rate_hz_(sample_rate_hz),
      signal_length_(signal_length),
      data_(num_frames * (params.window_length / 2 + 1)) {
  ValidateStftParams(params);
}

std::span<std::complex<double>> Spectrogram::frame(std::size_t index) {
  return {data_.data() + index * num_bins(), num_bins()};
}

std::span<const std::complex<double>> Spectrogram::frame(
    std::size_t index) const {
  return {data_.data() + index * num_bins(), num_bins()};
}

namespace {

// Frames needed so the padded signal (front pad + signal + tail) is covered
// up to at least one half window past the last sample.
std::size_t FrameCount(std::size_t signal_length, const StftParams& params) {
  const std::size_t padded = params.window_length / 2 + signal_length +
                             params.window_length / 2;
  if (padded <= params.window_length) return 1;
  return (padded - params.window_length + params.hop - 1) / params.hop + 1;
}

}  // namespace

Spectrogram Stft(std::span<const double> signal, int sample_rate_hz,
                 const StftParams& params) {
  ValidateStftParams(params);
  const std::size_t n = params.window_length;
  const std::size_t frames = FrameCount(signal.size(), params);
  Spectrogram spectrogram(frames, params, sample_rate_hz, signal.size());
  const auto window = HannWindow(n);
  const std::size_t pad = n / 2;
  std::vector<double> buffer(n);
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t start = t * params.hop;  // in padded coordinates
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t padded_index = start + i;
      double sample = 0.0;
      if (padded_index >= pad && padded_index - pad < signal.size()) {
        sample = signal[padded_index - pad];
      }
      buffer[i] = sample * window[i];
    }
    RealFft(buffer, spectrogram.frame(t));
  }
  return spectrogram;
}

std::vector<double> Istft(const Spectrogram& spectrogram) {
  const std::size_t n = spectrogram.window_length();
  const std::size_t hop = spectrogram.hop();
  const std::size_t pad = spectrogram.front_padding();
  const std::size_t length = spectrogram.signal_length();
  const auto window = HannWindow(n);

  std::vector<double> accum(length, 0.0);
  std::vector<double> norm(length, 0.0);
  std::vector<double> buffer(n);
  for (std::size_t t = 0; t < spectrogram.num_frames(); ++t) {
    InverseRealFft(spectrogram.frame(t), buffer);
    const std::size_t start = t * hop;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t padded_index = start + i;
      if (padded_index < pad || padded_index - pad >= length) continue;
      const std::size_t out = padded_index - pad;
      accum[out] += buffer[i] * window[i];
      norm[out] += window[i] * window[i];
    }
  }
  for (std::size_t i = 0; i < length; ++i) {
    accum[i] = norm[i] > 1e-12 ? accum[i] / norm[i] : 0.0;
  }
  return accum;
}

}  // namespace stereoqa
