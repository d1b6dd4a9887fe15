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

#ifndef STEREOQA_ANCHORS_H_
#define STEREOQA_ANCHORS_H_

#include <vector>

#include "stereoqa/audio_buffer.h"

namespace stereoqa {

// Linear-phase Kaiser-windowed sinc lowpass taps (odd length, unit DC gain)
// meeting >= 40 dB attenuation at 1.5x cutoff and < 0.5 dB ripple below
// 0.8x cutoff. Throws DomainError if cutoff is not below Nyquist.
std::vector<double> DesignLowpassFir(double cutoff_hz, int sample_rate_hz);

// MUSHRA lowpass anchor. The FIR group delay is compensated so the output is
// sample-aligned with the input.
AudioBuffer LowpassAnchor(const AudioBuffer& buffer, double cutoff_hz);

// Both output channels are (L + R) / 2. Throws ArityError for mono input.
AudioBuffer MonoAnchor(const AudioBuffer& buffer);

}  // namespace stereoqa

#endif  // STEREOQA_ANCHORS_H_
