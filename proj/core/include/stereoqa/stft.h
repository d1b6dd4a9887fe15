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

#ifndef STEREOQA_STFT_H_
#define STEREOQA_STFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace stereoqa {

inline constexpr std::size_t kDefaultWindowLength = 2048;

struct StftParams {
  std::size_t window_length = kDefaultWindowLength;
  std::size_t hop = kDefaultWindowLength / 2;
};

// Periodic Hann window of the given length.
std::vector<double> HannWindow(std::size_t length);

// Frames x bins matrix of one-sided STFT coefficients. The analysed signal is
// zero padded by window_length/2 at the front and to a whole number of hops at
// the back so every input sample lies under at least two frames.
class Spectrogram {
 public:
  Spectrogram(std::size_t num_frames, const StftParams& params,
              int sample_rate_hz, std::size_t signal_length);

  std::size_t num_frames() const { return num_frames_; }
  std::size_t num_bins() const { return params_.window_length / 2 + 1; }
  std::size_t window_length() const { return params_.window_length; }
  std::size_t hop() const { return params_.hop; }
  const StftParams& params() const { return params_; }
  int sample_rate_hz() const { return sample_rate_hz_; }
  std::size_t signal_length() const { return signal_length_; }
  // Analysis window label ("hann").
  const std::string& window_kind() const { return window_kind_; }
  // Set when the input was shorter than one window.
  bool zero_padded_short_input() const {
    return signal_length_ < params_.window_length;
  }
  // Samples of front padding applied before framing.
  std::size_t front_padding() const { return params_.window_length / 2; }

  std::span<std::complex<double>> frame(std::size_t index);
  std::span<const std::complex<double>> frame(std::size_t index) const;

  double bin_frequency_hz(std::size_t bin) const {
    return static_cast<double>(bin) * sample_rate_hz_ /
           static_cast<double>(params_.window_length);
  }

 private:
  std::size_t num_frames_;
  StftParams params_;
  int sample_rate_hz_;
  std::size_t signal_length_;
  std::string window_kind_ = "hann";
  std::vector<std::complex<double>> data_;
};

// Throws ConfigError unless window_length is a power of two >= 4 and
// 0 < hop <= window_length.
void ValidateStftParams(const StftParams& params);

Spectrogram Stft(std::span<const double> signal, int sample_rate_hz,
                 const StftParams& params = {});

// Weighted overlap-add inverse: each frame is inverse transformed, multiplied
// by the synthesis window and normalised by the summed squared window, which
// makes Istft(Stft(x)) == x up to rounding for any hop <= window_length/2.
std::vector<double> Istft(const Spectrogram& spectrogram);

}  // namespace stereoqa

#endif  // STEREOQA_STFT_H_
