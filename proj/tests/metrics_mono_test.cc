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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "stereoqa/error.h"
#include "stereoqa/masking.h"
#include "stereoqa/nmr.h"
#include "stereoqa/stft.h"
#include "stereoqa/timbre.h"
#include "test_signals.h"

namespace stereoqa {
namespace {

using testing::HarmonicTone;
using testing::kRate;
using testing::Sine;
using testing::Stereo;
using testing::WhiteNoise;

std::vector<double> Scale(std::vector<double> x, double gain) {
  for (double& v : x) v *= gain;
  return x;
}

TEST(BarkTest, ClosedForm) {
  for (double f : {50.0, 500.0, 1000.0, 4000.0, 15000.0}) {
    const double z = 13.0 * std::atan(0.00076 * f) + 3.5 * std::atan(std::pow(f / 7500.0, 2.0));
    EXPECT_NEAR(HzToBark(f), z, 1e-12);
  }
  EXPECT_NEAR(HzToBark(1000.0), 8.5, 0.05);
}

TEST(BarkTest, PartitionCoversSpectrum) {
  const BarkPartition p(2048, kRate);
  EXPECT_EQ(p.num_bins(), 1025u);
  EXPECT_EQ(p.band_edges_hz().size(), kNumBarkBands + 1);
  EXPECT_EQ(p.band_of_bin(0), 0u);
  EXPECT_EQ(p.band_of_bin(1024), kNumBarkBands - 1);
  for (std::size_t k = 1; k < p.num_bins(); ++k) {
    ASSERT_GE(p.band_of_bin(k), p.band_of_bin(k - 1));
  }
}

TEST(MaskingTest, SilenceGivesThresholdInQuiet) {
  const MaskingThreshold m = ComputeMaskingThreshold(std::vector<double>(kRate / 4, 0.0), kRate);
  for (std::size_t t = 0; t < m.threshold_db.num_frames(); ++t) {
    for (std::size_t b = 0; b < kNumBarkBands; ++b) {
      EXPECT_DOUBLE_EQ(m.threshold_db.at(t, b), m.threshold_in_quiet_db[b]);
    }
  }
}

TEST(MaskingTest, SinePeaksInItsBarkBand) {
  const MaskingThreshold m = ComputeMaskingThreshold(Sine(kRate / 2, 1000.0, 0.5), kRate);
  const double z = 13.0 * std::atan(0.76) + 3.5 * std::atan(std::pow(1000.0 / 7500.0, 2.0));
  const auto expected = static_cast<std::size_t>(std::floor(z));
  const std::size_t t = m.threshold_db.num_frames() / 2;
  const auto row = m.threshold_db.row(t);
  const auto peak = std::max_element(row.begin(), row.end()) - row.begin();
  EXPECT_EQ(static_cast<std::size_t>(peak), expected);
}

TEST(MaskingTest, LevelCovariance) {
  const std::vector<double> x = HarmonicTone(kRate / 2, 220.0, 0.05);
  const MaskingThreshold a = ComputeMaskingThreshold(x, kRate);
  const MaskingThreshold b = ComputeMaskingThreshold(Scale(x, std::pow(10.0, 0.5)), kRate);
  int checked = 0;
  for (std::size_t t = 0; t < a.threshold_db.num_frames(); ++t) {
    for (std::size_t b_i = 0; b_i < kNumBarkBands; ++b_i) {
      if (a.threshold_db.at(t, b_i) <= a.threshold_in_quiet_db[b_i] + 1e-9) continue;
      EXPECT_NEAR(b.threshold_db.at(t, b_i) - a.threshold_db.at(t, b_i), 10.0, 0.1);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(MaskingTest, SplConversionsInvert) {
  const MaskingModel model;
  EXPECT_NEAR(PowerToSplDb(0.5, model), model.full_scale_spl_db, 1e-12);
  EXPECT_NEAR(SplDbToPower(PowerToSplDb(1e-5, model), model), 1e-5, 1e-18);
}

TEST(MaskingTest, SilenceGateExcludesQuietFrames) {
  std::vector<double> x = Sine(kRate, 1000.0, 0.5);
  for (std::size_t i = kRate / 2; i < x.size(); ++i) x[i] *= 1e-4;  // -80 dB
  const MaskingModel model;
  const Spectrogram s = Stft(x, kRate, model.stft);
  const std::vector<bool> active = ActiveFrames(s, model);
  EXPECT_TRUE(active[5]);
  EXPECT_FALSE(active[s.num_frames() - 5]);
  const std::vector<bool> all = ActiveFrames(Stft(std::vector<double>(kRate / 4, 0.0), kRate), model);
  EXPECT_TRUE(std::all_of(all.begin(), all.end(), [](bool v) { return v; }));
}

AudioBuffer MusicPair() {
  return Stereo(HarmonicTone(kRate, 220.0, 0.3), HarmonicTone(kRate, 330.0, 0.2));
}

TEST(NmrTest, IdenticalSignalsHitFloor) {
  const AudioBuffer a = MusicPair();
  const NmrScore s = ComputeNmr(a, a);
  EXPECT_EQ(s.mean_nmr_db, kNmrFloorDb);
  ASSERT_EQ(s.per_channel_nmr_db.size(), 2u);
}

TEST(NmrTest, RejectsMisalignedBuffers) {
  const AudioBuffer a = MusicPair();
  const AudioBuffer b = Stereo(HarmonicTone(kRate / 2, 220.0, 0.3), HarmonicTone(kRate / 2, 330.0, 0.2));
  EXPECT_THROW(ComputeNmr(a, b), AlignmentError);
}

AudioBuffer AddNoise(const AudioBuffer& a, double level) {
  std::vector<std::vector<double>> ch;
  for (std::size_t c = 0; c < a.num_channels(); ++c) {
    std::vector<double> x(a.channel(c).begin(), a.channel(c).end());
    const std::vector<double> n = WhiteNoise(x.size(), level, 50 + c);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += n[i];
    ch.push_back(std::move(x));
  }
  return AudioBuffer(a.sample_rate_hz(), std::move(ch));
}

TEST(NmrTest, SixDecibelsMoreErrorIsSixDecibelsMoreNmr) {
  const AudioBuffer a = MusicPair();
  const double low = ComputeNmr(a, AddNoise(a, 0.001)).mean_nmr_db;
  const double high = ComputeNmr(a, AddNoise(a, 0.001 * std::pow(10.0, 6.0 / 20.0))).mean_nmr_db;
  EXPECT_NEAR(high - low, 6.0, 0.3);
}

TEST(NmrTest, ChannelSwapSymmetry) {
  const AudioBuffer a = MusicPair();
  const AudioBuffer b = AddNoise(a, 0.002);
  auto swap = [](const AudioBuffer& x) {
    return Stereo({x.channel(1).begin(), x.channel(1).end()},
                  {x.channel(0).begin(), x.channel(0).end()});
  };
  EXPECT_NEAR(ComputeNmr(a, b).mean_nmr_db, ComputeNmr(swap(a), swap(b)).mean_nmr_db, 1e-12);
}

TEST(TimbreTest, ModeNames) {
  for (ChannelMode m : {ChannelMode::kAverage, ChannelMode::kConcatenate, ChannelMode::kIldNormalize}) {
    EXPECT_EQ(ParseChannelMode(ChannelModeName(m)), m);
  }
  EXPECT_THROW(ParseChannelMode("sum"), ConfigError);
}

TEST(TimbreTest, IdentityIsOneInEveryMode) {
  const AudioBuffer a = MusicPair();
  for (ChannelMode m : {ChannelMode::kAverage, ChannelMode::kConcatenate, ChannelMode::kIldNormalize}) {
    EXPECT_NEAR(ModulationTimbreScore(a, a, m).similarity, 1.0, 1e-9);
  }
}

TEST(TimbreTest, IldNormalizeIgnoresChannelGain) {
  const AudioBuffer a = MusicPair();
  for (double gain_db : {-12.0, -6.0, 3.0, 12.0}) {
    const double g = std::pow(10.0, gain_db / 20.0);
    const AudioBuffer b = Stereo(Scale({a.channel(0).begin(), a.channel(0).end()}, g),
                                 {a.channel(1).begin(), a.channel(1).end()});
    const double s = ModulationTimbreScore(a, b, ChannelMode::kIldNormalize).similarity;
    EXPECT_NEAR(s, 1.0, 1e-6) << gain_db;
  }
}

TEST(TimbreTest, IndependentNoiseIsDissimilar) {
  const std::size_t n = 2 * kRate;
  const AudioBuffer a = Stereo(WhiteNoise(n, 0.1, 1), WhiteNoise(n, 0.1, 2));
  const AudioBuffer b = Stereo(WhiteNoise(n, 0.1, 3), WhiteNoise(n, 0.1, 4));
  for (ChannelMode m : {ChannelMode::kAverage, ChannelMode::kConcatenate, ChannelMode::kIldNormalize}) {
    const double s = ModulationTimbreScore(a, b, m).similarity;
    EXPECT_LT(s, 0.2);
    EXPECT_GE(s, -1.0);
  }
}

TEST(TimbreTest, DegradationLowersSimilarity) {
  const AudioBuffer a = MusicPair();
  const double mild = ModulationTimbreScore(a, AddNoise(a, 0.003), ChannelMode::kAverage).similarity;
  const double strong = ModulationTimbreScore(a, AddNoise(a, 0.1), ChannelMode::kAverage).similarity;
  EXPECT_LT(strong, mild);
  EXPECT_LE(mild, 1.0);
}

TEST(TimbreTest, EnvelopeShape) {
  const BandMatrix m = EnvelopeRepresentation(HarmonicTone(kRate / 2, 220.0, 0.3), kRate);
  EXPECT_EQ(m.num_bands(), kNumBarkBands);
  EXPECT_GT(m.num_frames(), 10u);
}

}  // namespace
}  // namespace stereoqa
