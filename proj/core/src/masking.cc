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

#include "stereoqa/masking.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stereoqa {

double HzToBark(double hz) {
  const double ratio = hz / 7500.0;
  return 13.0 * std::atan(0.00076 * hz) + 3.5 * std::atan(ratio * ratio);
}

double ThresholdInQuietDb(double hz) {
  const double khz = std::max(hz, 20.0) / 1000.0;
  return 3.64 * std::pow(khz, -0.8) -
         6.5 * std::exp(-0.6 * (khz - 3.3) * (khz - 3.3)) +
         1e-3 * std::pow(khz, 4.0);
}

namespace {

// Frequency at which HzToBark reaches `bark`, by bisection (z is monotonic).
double BarkToHz(double bark, double nyquist) {
  double lo = 0.0;
  double hi = nyquist;
  if (HzToBark(hi) <= bark) return hi;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (HzToBark(mid) < bark ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BarkPartition::BarkPartition(std::size_t window_length, int sample_rate_hz) {
  const std::size_t bins = window_length / 2 + 1;
  const double nyquist = sample_rate_hz / 2.0;
  band_of_bin_.resize(bins);
  quiet_db_.assign(kNumBarkBands, std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < bins; ++k) {
    const double hz = static_cast<double>(k) * sample_rate_hz /
                      static_cast<double>(window_length);
    const auto band = std::min<std::size_t>(
        static_cast<std::size_t>(std::floor(HzToBark(hz))), kNumBarkBands - 1);
    band_of_bin_[k] = band;
    quiet_db_[band] = std::min(quiet_db_[band], ThresholdInQuietDb(hz));
  }
  for (std::size_t b = 0; b < kNumBarkBands; ++b) {
    edges_hz_.push_back(BarkToHz(static_cast<double>(b), nyquist));
    if (std::isinf(quiet_db_[b])) {
      quiet_db_[b] = ThresholdInQuietDb(edges_hz_.back());
    }
  }
  edges_hz_.push_back(nyquist);
}

BandMatrix BarkBandPowers(const Spectrogram& spectrogram,
                          const BarkPartition& partition) {
  const std::size_t n = spectrogram.window_length();
  const std::size_t last_bin = spectrogram.num_bins() - 1;
  double window_energy = 0.0;
  for (double w : HannWindow(n)) window_energy += w * w;
  const double scale = 2.0 / (static_cast<double>(n) * window_energy);

  BandMatrix powers(spectrogram.num_frames(), kNumBarkBands);
  for (std::size_t t = 0; t < spectrogram.num_frames(); ++t) {
    const auto frame = spectrogram.frame(t);
    for (std::size_t k = 0; k <= last_bin; ++k) {
      // DC and Nyquist have no mirrored negative-frequency twin.
      const double weight = (k == 0 || k == last_bin) ? 0.5 : 1.0;
      powers.at(t, partition.band_of_bin(k)) +=
          weight * std::norm(frame[k]) * scale;
    }
  }
  return powers;
}

double PowerToSplDb(double power, const MaskingModel& model) {
  return model.full_scale_spl_db + 10.0 * std::log10(2.0 * power);
}

double SplDbToPower(double spl_db, const MaskingModel& model) {
  return 0.5 * std::pow(10.0, (spl_db - model.full_scale_spl_db) / 10.0);
}

MaskingThreshold ComputeMaskingThreshold(const Spectrogram& spectrogram,
                                         const MaskingModel& model) {
  const BarkPartition partition(spectrogram.window_length(),
                                spectrogram.sample_rate_hz());
  const BandMatrix powers = BarkBandPowers(spectrogram, partition);
  const auto& quiet = partition.threshold_in_quiet_db();

  // Spreading weights in the power domain, indexed [maskee][masker].
  std::vector<double> spread(kNumBarkBands * kNumBarkBands);
  for (std::size_t i = 0; i < kNumBarkBands; ++i) {
    for (std::size_t j = 0; j < kNumBarkBands; ++j) {
      const double dz = static_cast<double>(i) - static_cast<double>(j);
      const double db = dz >= 0.0 ? -model.upper_slope_db_per_bark * dz
                                  : model.lower_slope_db_per_bark * dz;
      spread[i * kNumBarkBands + j] = std::pow(10.0, db / 10.0);
    }
  }
  const double offset = std::pow(10.0, -model.offset_db / 10.0);

  MaskingThreshold result;
  result.threshold_db = BandMatrix(powers.num_frames(), kNumBarkBands);
  result.signal_db = BandMatrix(powers.num_frames(), kNumBarkBands);
  result.band_edges_hz = partition.band_edges_hz();
  result.threshold_in_quiet_db = quiet;
  for (std::size_t t = 0; t < powers.num_frames(); ++t) {
    for (std::size_t i = 0; i < kNumBarkBands; ++i) {
      double masked = 0.0;
      for (std::size_t j = 0; j < kNumBarkBands; ++j) {
        masked += powers.at(t, j) * spread[i * kNumBarkBands + j];
      }
      const double threshold =
          masked > 0.0 ? PowerToSplDb(masked * offset, model)
                       : -std::numeric_limits<double>::infinity();
      result.threshold_db.at(t, i) = std::max(threshold, quiet[i]);
      result.signal_db.at(t, i) =
          powers.at(t, i) > 0.0 ? PowerToSplDb(powers.at(t, i), model)
                                : -std::numeric_limits<double>::infinity();
    }
  }
  return result;
}

MaskingThreshold ComputeMaskingThreshold(std::span<const double> channel,
                                         int sample_rate_hz,
                                         const MaskingModel& model) {
  return ComputeMaskingThreshold(Stft(channel, sample_rate_hz, model.stft),
                                 model);
}

std::vector<bool> ActiveFrames(const Spectrogram& spectrogram,
                               const MaskingModel& model) {
  std::vector<double> energy(spectrogram.num_frames(), 0.0);
  for (std::size_t t = 0; t < spectrogram.num_frames(); ++t) {
    for (const auto& bin : spectrogram.frame(t)) energy[t] += std::norm(bin);
  }
  const double peak =
      energy.empty() ? 0.0 : *std::max_element(energy.begin(), energy.end());
  const double gate = peak * std::pow(10.0, -model.silence_gate_db / 10.0);
  std::vector<bool> active(energy.size());
  bool any = false;
  for (std::size_t t = 0; t < energy.size(); ++t) {
    active[t] = energy[t] > 0.0 && energy[t] >= gate;
    any = any || active[t];
  }
  if (!any) active.assign(energy.size(), true);
  return active;
}

}  // namespace stereoqa
