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

#ifndef STEREOQA_MID_SIDE_H_
#define STEREOQA_MID_SIDE_H_

#include "stereoqa/audio_buffer.h"

namespace stereoqa {

// Orthonormal Mid/Side pair: M = (L + R)/sqrt(2), S = (L - R)/sqrt(2).
// Both throw ArityError for non-stereo input.
AudioBuffer ToMidSide(const AudioBuffer& left_right);
AudioBuffer FromMidSide(const AudioBuffer& mid_side);

}  // namespace stereoqa

#endif  // STEREOQA_MID_SIDE_H_
