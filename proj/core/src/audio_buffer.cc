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

#include "stereoqa/audio_buffer.h"

#include <cmath>
#include <string>
#include <utility>

#include "stereoqa/error.h"

namespace stereoqa {

bool IsSupportedSampleRate(int sample_rate_hz) {
  return sample_rate_hz == 44100 || sample_rate_hz == 48000;
}

AudioBuffer::AudioBuffer(int sample_rate_hz,
                         std::vector<std::vector<double>> channels,
                         double full_scale_spl_db)
    : sample_rate_hz_(sample_rate_hz),
      channels_(std::move(channels)),
      full_scale_spl_db_(full_scale_spl_db) {
  if (!IsSupportedSampleRate(sample_rate_hz_)) {
    throw ConfigError("unsupported sample rate " +
                      std::to_string(sample_rate_hz_) +
                      " Hz (expected 44100 or 48000)");
  }
  if (channels_.empty() || channels_.size() > 2) {
    throw ArityError("audio must have 1 or 2 channels, got " +
                     std::to_string(channels_.size()));
  }
  for (const auto& channel : channels_) {
    if (channel.size() != channels_.front().size()) {
      throw AlignmentError("channels have unequal lengths");
    }
  }
  if (!std::isfinite(full_scale_spl_db_)) {
    throw ConfigError("full-scale SPL must be finite");
  }
}

std::span<const double> AudioBuffer::channel(std::size_t index) const {
  if (index >= channels_.size()) {
    throw ArityError("channel index " + std::to_string(index) +
                     " out of range");
  }
  return channels_[index];
}

AudioBuffer AudioBuffer::WithFullScale(double full_scale_spl_db) const {
  return AudioBuffer(sample_rate_hz_, channels_, full_scale_spl_db);
}

AudioBuffer AudioBuffer::Scaled(double gain) const {
  auto channels = channels_;
  for (auto& channel : channels) {
    for (double& sample : channel) sample *= gain;
  }
  return AudioBuffer(sample_rate_hz_, std::move(channels), full_scale_spl_db_);
}

void RequireStereo(const AudioBuffer& buffer, const char* what) {
  if (buffer.num_channels() != 2) {
    throw ArityError(std::string(what) + " requires stereo input, got " +
                     std::to_string(buffer.num_channels()) + " channel(s)");
  }
}

void RequireAligned(const AudioBuffer& reference, const AudioBuffer& test) {
  if (reference.sample_rate_hz() != test.sample_rate_hz()) {
    throw AlignmentError("sample rates differ: " +
                         std::to_string(reference.sample_rate_hz()) + " vs " +
                         std::to_string(test.sample_rate_hz()));
  }
  if (reference.num_channels() != test.num_channels()) {
    throw AlignmentError("channel counts differ");
  }
  if (reference.num_samples() != test.num_samples()) {
    throw AlignmentError("lengths differ: " +
                         std::to_string(reference.num_samples()) + " vs " +
                         std::to_string(test.num_samples()) + " samples");
  }
}

double CalibrationGain(const LevelCalibration& calibration) {
  const double gain = std::pow(
      10.0, (calibration.target_spl_db - calibration.full_scale_spl_db) / 20.0);
  if (!std::isfinite(gain) || gain <= 0.0) {
    throw DomainError("calibration gain is not a finite positive number");
  }
  return gain;
}

}  // namespace stereoqa
