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

#ifndef STEREOQA_AUDIO_BUFFER_H_
#define STEREOQA_AUDIO_BUFFER_H_

#include <cstddef>
#include <span>
#include <vector>

namespace stereoqa {

// dB SPL that a sample amplitude of 1.0 corresponds to unless overridden.
inline constexpr double kDefaultFullScaleSplDb = 100.0;

// Multi-channel (mono or stereo) sampled audio. Immutable once constructed;
// every processing function returns a new buffer.
class AudioBuffer {
 public:
  // Throws ConfigError for an unsupported sample rate or non-finite full-scale
  // level, ArityError for a channel count other than 1 or 2 and
  // AlignmentError for channels of unequal length.
  AudioBuffer(int sample_rate_hz, std::vector<std::vector<double>> channels,
              double full_scale_spl_db = kDefaultFullScaleSplDb);

  int sample_rate_hz() const { return sample_rate_hz_; }
  double full_scale_spl_db() const { return full_scale_spl_db_; }
  std::size_t num_channels() const { return channels_.size(); }
  std::size_t num_samples() const {
    return channels_.empty() ? 0 : channels_.front().size();
  }
  double duration_s() const {
    return static_cast<double>(num_samples()) / sample_rate_hz_;
  }

  std::span<const double> channel(std::size_t index) const;
  const std::vector<std::vector<double>>& channels() const { return channels_; }

  // Same audio and rate, different full-scale convention.
  AudioBuffer WithFullScale(double full_scale_spl_db) const;
  // Every sample multiplied by `gain`.
  AudioBuffer Scaled(double gain) const;

  friend bool operator==(const AudioBuffer&, const AudioBuffer&) = default;

 private:
  int sample_rate_hz_;
  std::vector<std::vector<double>> channels_;
  double full_scale_spl_db_;
};

// Throws ArityError unless `buffer` has exactly two channels.
void RequireStereo(const AudioBuffer& buffer, const char* what);

// Throws AlignmentError unless both buffers share rate, channel count and
// length.
void RequireAligned(const AudioBuffer& reference, const AudioBuffer& test);

bool IsSupportedSampleRate(int sample_rate_hz);

// Level at which the audio is presented versus the level a sample of 1.0 maps
// to. Metrics multiply samples by CalibrationGain() before analysis.
struct LevelCalibration {
  double target_spl_db = 92.0;
  double full_scale_spl_db = kDefaultFullScaleSplDb;
};

// 10^((target - full_scale) / 20). Throws DomainError if the result is not a
// finite positive number.
double CalibrationGain(const LevelCalibration& calibration);

}  // namespace stereoqa

#endif  // STEREOQA_AUDIO_BUFFER_H_
