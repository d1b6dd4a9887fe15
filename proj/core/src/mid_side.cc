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

#include "stereoqa/mid_side.h"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace stereoqa {
namespace {

// Both directions are the same orthonormal butterfly.
AudioBuffer Butterfly(const AudioBuffer& in) {
  const auto a = in.channel(0);
  const auto b = in.channel(1);
  std::vector<double> sum(a.size());
  std::vector<double> diff(a.size());
  constexpr double kScale = 1.0 / std::numbers::sqrt2;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum[i] = (a[i] + b[i]) * kScale;
    diff[i] = (a[i] - b[i]) * kScale;
  }
  std::vector<std::vector<double>> channels;
  channels.push_back(std::move(sum));
  channels.push_back(std::move(diff));
  return AudioBuffer(in.sample_rate_hz(), std::move(channels),
                     in.full_scale_spl_db());
}

}  // namespace

AudioBuffer ToMidSide(const AudioBuffer& left_right) {
  RequireStereo(left_right, "Mid/Side encoding");
  return Butterfly(left_right);
}

AudioBuffer FromMidSide(const AudioBuffer& mid_side) {
  RequireStereo(mid_side, "Mid/Side decoding");
  return Butterfly(mid_side);
}

}  // namespace stereoqa
