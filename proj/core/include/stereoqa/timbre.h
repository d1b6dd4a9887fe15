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

#ifndef STEREOQA_TIMBRE_H_
#define STEREOQA_TIMBRE_H_

#include <span>
#include <string>
#include <string_view>

#include "stereoqa/audio_buffer.h"
#include "stereoqa/masking.h"
#include "stereoqa/stft.h"

namespace stereoqa {

// How the two channels of a stereo pair enter the monaural timbre model.
enum class ChannelMode {
  kAverage,       // score each channel, take the mean
  kConcatenate,   // join the channel representations along time
  kIldNormalize,  // match each test channel's RMS to its reference, then average
};

std::string_view ChannelModeName(ChannelMode mode);
// Throws ConfigError for an unknown name.
ChannelMode ParseChannelMode(std::string_view name);

struct TimbreParams {
  StftParams stft{1024, 512};
  double compression_exponent = 0.3;
  double envelope_cutoff_hz = 8.0;
};

struct TimbreScore {
  double similarity = 1.0;  // in [-1, 1]
  ChannelMode channel_mode = ChannelMode::kAverage;
};

// Internal representation of one channel: frames x 24 Bark band envelopes,
// compressed and zero-phase lowpass smoothed along time.
BandMatrix EnvelopeRepresentation(std::span<const double> channel,
                                  int sample_rate_hz,
                                  const TimbreParams& params = {});

TimbreScore ModulationTimbreScore(const AudioBuffer& reference,
                                  const AudioBuffer& test, ChannelMode mode,
                                  const TimbreParams& params = {});

}  // namespace stereoqa

#endif  // STEREOQA_TIMBRE_H_
