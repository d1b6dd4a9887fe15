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

#ifndef STEREOQA_MASKING_H_
#define STEREOQA_MASKING_H_

#include <cstddef>
#include <span>
#include <vector>

#include "stereoqa/audio_buffer.h"
#include "stereoqa/stft.h"

namespace stereoqa {

inline constexpr std::size_t kNumBarkBands = 24;

// z(f) = 13 atan(0.00076 f) + 3.5 atan((f / 7500)^2), in Bark.
double HzToBark(double hz);

// Absolute threshold of hearing in dB SPL (Terhardt approximation). The
// frequency is clamped to >= 20 Hz.
double ThresholdInQuietDb(double hz);

// Parameters of the level-independent spreading masking model. Samples are
// interpreted so that an amplitude of 1.0 is `full_scale_spl_db`.
struct MaskingModel {
  StftParams stft;
  double full_scale_spl_db = kDefaultFullScaleSplDb;
  double lower_slope_db_per_bark = 27.0;  // masker above maskee
  double upper_slope_db_per_bark = 10.0;  // masker below maskee
  double offset_db = 18.0;
  // Frames whose broadband energy is more than this far below the loudest
  // frame of the channel are excluded from aggregation.
  double silence_gate_db = 60.0;
};

// Maps STFT bins to the 24-band Bark partition of 0..Nyquist: band b holds
// bins with b <= z(f) < b + 1, the last band extends to Nyquist.
class BarkPartition {
 public:
  BarkPartition(std::size_t window_length, int sample_rate_hz);

  std::size_t band_of_bin(std::size_t bin) const { return band_of_bin_[bin]; }
  std::size_t num_bins() const { return band_of_bin_.size(); }
  // Lower edge frequency of each band plus the Nyquist frequency.
  const std::vector<double>& band_edges_hz() const { return edges_hz_; }
  // Per-band threshold in quiet (minimum over the band's bins), dB SPL.
  const std::vector<double>& threshold_in_quiet_db() const { return quiet_db_; }

 private:
  std::vector<std::size_t> band_of_bin_;
  std::vector<double> edges_hz_;
  std::vector<double> quiet_db_;
};

// Frames x bands matrix in row-major order.
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(std::size_t frames, std::size_t bands, double fill = 0.0)
      : frames_(frames), bands_(bands), values_(frames * bands, fill) {}

  std::size_t num_frames() const { return frames_; }
  std::size_t num_bands() const { return bands_; }
  double& at(std::size_t frame, std::size_t band) {
    return values_[frame * bands_ + band];
  }
  double at(std::size_t frame, std::size_t band) const {
    return values_[frame * bands_ + band];
  }
  std::span<const double> row(std::size_t frame) const {
    return {values_.data() + frame * bands_, bands_};
  }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t frames_ = 0;
  std::size_t bands_ = 0;
  std::vector<double> values_;
};

// Band powers as mean-square amplitude: a sine of amplitude A entirely inside
// one band contributes A^2 / 2.
BandMatrix BarkBandPowers(const Spectrogram& spectrogram,
                          const BarkPartition& partition);

// Level in dB SPL of a mean-square power under `model`'s full-scale convention
// (a full-scale sine reads full_scale_spl_db).
double PowerToSplDb(double power, const MaskingModel& model);
double SplDbToPower(double spl_db, const MaskingModel& model);

struct MaskingThreshold {
  // Threshold level per frame and band, dB SPL; >= threshold in quiet.
  BandMatrix threshold_db;
  // Signal band level per frame and band, dB SPL (-inf for silence).
  BandMatrix signal_db;
  std::vector<double> band_edges_hz;
  std::vector<double> threshold_in_quiet_db;
};

// Spreads band powers across bands with the model's triangular slopes,
// subtracts the offset and floors the result at the threshold in quiet.
MaskingThreshold ComputeMaskingThreshold(const Spectrogram& spectrogram,
                                         const MaskingModel& model = {});
MaskingThreshold ComputeMaskingThreshold(std::span<const double> channel,
                                         int sample_rate_hz,
                                         const MaskingModel& model = {});

// Frames that pass the silence gate: energy > 0 and within
// model.silence_gate_db of the loudest frame. If no frame passes, all frames
// are returned as passing.
std::vector<bool> ActiveFrames(const Spectrogram& spectrogram,
                               const MaskingModel& model);

}  // namespace stereoqa

#endif  // STEREOQA_MASKING_H_
