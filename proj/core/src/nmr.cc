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

#include "stereoqa/nmr.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stereoqa/error.h"

namespace stereoqa {

double ChannelNmrDb(std::span<const double> reference,
                    std::span<const double> test, int sample_rate_hz,
                    const MaskingModel& model) {
  if (reference.size() != test.size()) {
    throw AlignmentError("NMR needs equal-length reference and test");
  }
  std::vector<double> error(reference.size());
  for (std::size_t i = 0; i < error.size(); ++i) {
    error[i] = test[i] - reference[i];
  }
  const Spectrogram ref_spec = Stft(reference, sample_rate_hz, model.stft);
  const MaskingThreshold mask = ComputeMaskingThreshold(ref_spec, model);
  const std::vector<bool> active = ActiveFrames(ref_spec, model);

  const Spectrogram err_spec = Stft(error, sample_rate_hz, model.stft);
  const BarkPartition partition(model.stft.window_length, sample_rate_hz);
  const BandMatrix err_power = BarkBandPowers(err_spec, partition);

  double ratio_sum = 0.0;
  std::size_t cells = 0;
  for (std::size_t t = 0; t < err_power.num_frames(); ++t) {
    if (!active[t]) continue;
    for (std::size_t b = 0; b < kNumBarkBands; ++b) {
      const double threshold_power = SplDbToPower(mask.threshold_db.at(t, b), model);
      ratio_sum += err_power.at(t, b) / threshold_power;
      ++cells;
    }
  }
  if (cells == 0 || ratio_sum <= 0.0) return kNmrFloorDb;
  return std::max(kNmrFloorDb, 10.0 * std::log10(ratio_sum / cells));
}

NmrScore ComputeNmr(const AudioBuffer& reference, const AudioBuffer& test,
                    const MaskingModel& model) {
  RequireAligned(reference, test);
  NmrScore score;
  for (std::size_t c = 0; c < reference.num_channels(); ++c) {
    score.per_channel_nmr_db.push_back(ChannelNmrDb(
        reference.channel(c), test.channel(c), reference.sample_rate_hz(), model));
  }
  score.mean_nmr_db = std::accumulate(score.per_channel_nmr_db.begin(),
                                      score.per_channel_nmr_db.end(), 0.0) /
                      static_cast<double>(score.per_channel_nmr_db.size());
  return score;
}

}  // namespace stereoqa
