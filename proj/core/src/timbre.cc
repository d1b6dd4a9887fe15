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

#include "stereoqa/timbre.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "stereoqa/error.h"

namespace stereoqa {

std::string_view ChannelModeName(ChannelMode mode) {
  switch (mode) {
    case ChannelMode::kAverage:
      return "average";
    case ChannelMode::kConcatenate:
      return "concatenate";
    case ChannelMode::kIldNormalize:
      return "ild_normalize";
  }
  return "average";
}

ChannelMode ParseChannelMode(std::string_view name) {
  for (auto mode : {ChannelMode::kAverage, ChannelMode::kConcatenate,
                    ChannelMode::kIldNormalize}) {
    if (name == ChannelModeName(mode)) return mode;
  }
  throw ConfigError("unknown channel mode '" + std::string(name) + "'");
}

BandMatrix EnvelopeRepresentation(std::span<const double> channel,
                                  int sample_rate_hz,
                                  const TimbreParams& params) {
  const Spectrogram spec = Stft(channel, sample_rate_hz, params.stft);
  const BarkPartition partition(params.stft.window_length, sample_rate_hz);
  BandMatrix env = BarkBandPowers(spec, partition);
  const std::size_t frames = env.num_frames();
  // Band magnitude = sqrt(power), then the compressive exponent.
  const double exponent = params.compression_exponent / 2.0;
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t b = 0; b < kNumBarkBands; ++b) {
      env.at(t, b) = std::pow(env.at(t, b), exponent);
    }
  }
  // Zero-phase one-pole smoothing along time (forward then backward pass).
  const double frame_rate =
      static_cast<double>(sample_rate_hz) / static_cast<double>(params.stft.hop);
  const double pole =
      std::exp(-2.0 * std::numbers::pi * params.envelope_cutoff_hz / frame_rate);
  for (std::size_t b = 0; b < kNumBarkBands && frames > 0; ++b) {
    double state = env.at(0, b);
    for (std::size_t t = 0; t < frames; ++t) {
      state = pole * state + (1.0 - pole) * env.at(t, b);
      env.at(t, b) = state;
    }
    state = env.at(frames - 1, b);
    for (std::size_t t = frames; t-- > 0;) {
      state = pole * state + (1.0 - pole) * env.at(t, b);
      env.at(t, b) = state;
    }
  }
  return env;
}

namespace {

// Zero-lag correlation of the test representation with the reference, both
// centred on the reference's per-band temporal mean. Centring on the
// reference (not on each signal's own mean) keeps level changes visible.
double CenteredCorrelation(const std::vector<const BandMatrix*>& reference,
                           const std::vector<const BandMatrix*>& test) {
  std::vector<double> mean(kNumBarkBands, 0.0);
  std::size_t frames = 0;
  for (const BandMatrix* m : reference) {
    for (std::size_t t = 0; t < m->num_frames(); ++t) {
      for (std::size_t b = 0; b < kNumBarkBands; ++b) mean[b] += m->at(t, b);
    }
    frames += m->num_frames();
  }
  if (frames == 0) return 1.0;
  for (double& m : mean) m /= static_cast<double>(frames);

  double cross = 0.0;
  double ref_energy = 0.0;
  double test_energy = 0.0;
  bool identical = true;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const BandMatrix& r = *reference[i];
    const BandMatrix& s = *test[i];
    for (std::size_t t = 0; t < r.num_frames(); ++t) {
      for (std::size_t b = 0; b < kNumBarkBands; ++b) {
        const double x = r.at(t, b) - mean[b];
        const double y = s.at(t, b) - mean[b];
        cross += x * y;
        ref_energy += x * x;
        test_energy += y * y;
        identical = identical && r.at(t, b) == s.at(t, b);
      }
    }
  }
  if (identical) return 1.0;
  const double denom = std::sqrt(ref_energy * test_energy);
  if (denom <= 0.0) return 0.0;
  return std::clamp(cross / denom, -1.0, 1.0);
}

double Rms(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return x.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(x.size()));
}

}  // namespace

TimbreScore ModulationTimbreScore(const AudioBuffer& reference,
                                  const AudioBuffer& test, ChannelMode mode,
                                  const TimbreParams& params) {
  RequireAligned(reference, test);
  const int rate = reference.sample_rate_hz();
  const std::size_t channels = reference.num_channels();

  std::vector<BandMatrix> ref_env;
  std::vector<BandMatrix> test_env;
  for (std::size_t c = 0; c < channels; ++c) {
    ref_env.push_back(EnvelopeRepresentation(reference.channel(c), rate, params));
    if (mode == ChannelMode::kIldNormalize) {
      const double ref_rms = Rms(reference.channel(c));
      const double test_rms = Rms(test.channel(c));
      std::vector<double> scaled(test.channel(c).begin(), test.channel(c).end());
      if (test_rms > 0.0) {
        const double gain = ref_rms / test_rms;
        for (double& v : scaled) v *= gain;
      }
      test_env.push_back(EnvelopeRepresentation(scaled, rate, params));
    } else {
      test_env.push_back(EnvelopeRepresentation(test.channel(c), rate, params));
    }
  }

  TimbreScore score;
  score.channel_mode = mode;
  if (mode == ChannelMode::kConcatenate) {
    std::vector<const BandMatrix*> r;
    std::vector<const BandMatrix*> s;
    for (std::size_t c = 0; c < channels; ++c) {
      r.push_back(&ref_env[c]);
      s.push_back(&test_env[c]);
    }
    score.similarity = CenteredCorrelation(r, s);
    return score;
  }
  double sum = 0.0;
  for (std::size_t c = 0; c < channels; ++c) {
    sum += CenteredCorrelation({&ref_env[c]}, {&test_env[c]});
  }
  score.similarity = sum / static_cast<double>(channels);
  return score;
}

}  // namespace stereoqa
