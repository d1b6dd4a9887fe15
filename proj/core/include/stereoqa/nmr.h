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

#ifndef STEREOQA_NMR_H_
#define STEREOQA_NMR_H_

#include <span>
#include <vector>

#include "stereoqa/audio_buffer.h"
#include "stereoqa/masking.h"

namespace stereoqa {

inline constexpr double kNmrFloorDb = -100.0;

struct NmrScore {
  std::vector<double> per_channel_nmr_db;
  // Arithmetic mean of the per-channel dB values.
  double mean_nmr_db = kNmrFloorDb;
};

// Noise-to-mask ratio of one channel: the error (test - reference) band
// power divided by the reference masking threshold, averaged in the power
// domain over all bands of the active frames, in dB, clamped at the floor.
double ChannelNmrDb(std::span<const double> reference,
                    std::span<const double> test, int sample_rate_hz,
                    const MaskingModel& model = {});

// Per-channel NMR and its mean. Throws AlignmentError if the buffers differ in
// length, rate or channel count.
NmrScore ComputeNmr(const AudioBuffer& reference, const AudioBuffer& test,
                    const MaskingModel& model = {});

}  // namespace stereoqa

#endif  // STEREOQA_NMR_H_
