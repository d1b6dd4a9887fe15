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
#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "stereoqa/anchors.h"
#include "stereoqa/audio_buffer.h"
#include "stereoqa/csv.h"
#include "stereoqa/error.h"
#include "stereoqa/fft.h"
#include "stereoqa/log.h"
#include "stereoqa/mid_side.h"
#include "stereoqa/rng.h"
#include "stereoqa/stft.h"
#include "stereoqa/wav.h"
#include "test_signals.h"

namespace stereoqa {
namespace {

using testing::HarmonicTone;
using testing::kRate;
using testing::Mono;
using testing::Sine;
using testing::Stereo;
using testing::WhiteNoise;

namespace fs = std::filesystem;

fs::path TempPath(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "stereoqa_audio_core_test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(AudioBufferTest, RejectsUnsupportedRate) {
  EXPECT_THROW(AudioBuffer(22050, {{0.0}}), ConfigError);
  EXPECT_NO_THROW(AudioBuffer(44100, {{0.0}}));
}

TEST(AudioBufferTest, RejectsBadChannelLayouts) {
  EXPECT_THROW(AudioBuffer(kRate, {}), ArityError);
  EXPECT_THROW(AudioBuffer(kRate, {{0.0}, {0.0}, {0.0}}), ArityError);
  EXPECT_THROW(AudioBuffer(kRate, {{0.0, 1.0}, {0.0}}), AlignmentError);
  EXPECT_THROW(AudioBuffer(kRate, {{0.0}}, std::nan("")), ConfigError);
}

TEST(AudioBufferTest, RequireHelpers) {
  const AudioBuffer mono = Mono({0.0, 0.0});
  EXPECT_THROW(RequireStereo(mono, "test"), ArityError);
  const AudioBuffer a = Stereo({0.0, 0.0}, {0.0, 0.0});
  const AudioBuffer b = Stereo({0.0}, {0.0});
  EXPECT_THROW(RequireAligned(a, b), AlignmentError);
  EXPECT_NO_THROW(RequireAligned(a, a));
}

TEST(CalibrationTest, KnownGains) {
  EXPECT_DOUBLE_EQ(CalibrationGain({100.0, 100.0}), 1.0);
  EXPECT_NEAR(CalibrationGain({92.0, 100.0}), std::pow(10.0, -0.4), 1e-15);
  EXPECT_NEAR(CalibrationGain({65.0, 100.0}), std::pow(10.0, -1.75), 1e-15);
}

TEST(CalibrationTest, GainsCompose) {
  const double ab = CalibrationGain({92.0, 100.0});
  const double bc = CalibrationGain({65.0, 92.0});
  const double ac = CalibrationGain({65.0, 100.0});
  EXPECT_NEAR(ab * bc, ac, 1e-12 * ac);
}

TEST(CalibrationTest, RejectsNonFinite) {
  EXPECT_THROW(CalibrationGain({std::nan(""), 100.0}), DomainError);
  EXPECT_THROW(CalibrationGain({1e6, 0.0}), DomainError);
}

TEST(WavTest, TenSecondStereo24BitLength) {
  const std::size_t n = 10 * kRate;
  const AudioBuffer in = Stereo(Sine(n, 440.0, 0.25), Sine(n, 660.0, 0.25));
  const fs::path path = TempPath("ten_seconds.wav");
  SaveWav(in, path, WavSampleFormat::kPcm24);
  const AudioBuffer out = LoadWav(path);
  EXPECT_EQ(out.num_channels(), 2u);
  EXPECT_EQ(out.num_samples(), 480000u);
  EXPECT_EQ(out.sample_rate_hz(), kRate);
}

void WriteRaw16(const fs::path& path, const std::vector<std::int16_t>& samples) {
  std::ofstream out(path, std::ios::binary);
  auto u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto u16 = [&](std::uint16_t v) { out.write(reinterpret_cast<const char*>(&v), 2); };
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  out.write("RIFF", 4);
  u32(36 + data_bytes + 12);
  out.write("WAVE", 4);
  out.write("LIST", 4);  // an unknown chunk that must be skipped
  u32(4);
  out.write("INFO", 4);
  out.write("fmt ", 4);
  u32(16);
  u16(1);
  u16(1);
  u32(kRate);
  u32(kRate * 2);
  u16(2);
  u16(16);
  out.write("data", 4);
  u32(data_bytes);
  for (std::int16_t s : samples) u16(static_cast<std::uint16_t>(s));
}

TEST(WavTest, Pcm16Normalisation) {
  const fs::path path = TempPath("pcm16.wav");
  WriteRaw16(path, {32767, -32768, 0, 16384});
  const AudioBuffer b = LoadWav(path);
  ASSERT_EQ(b.num_samples(), 4u);
  EXPECT_DOUBLE_EQ(b.channel(0)[0], 32767.0 / 32768.0);
  EXPECT_DOUBLE_EQ(b.channel(0)[1], -1.0);
  EXPECT_DOUBLE_EQ(b.channel(0)[3], 0.5);
}

class WavRoundtripTest : public ::testing::TestWithParam<std::pair<WavSampleFormat, int>> {};

TEST_P(WavRoundtripTest, ErrorWithinOneStep) {
  const auto [format, bits] = GetParam();
  const std::size_t n = 4000;
  const AudioBuffer in = Stereo(WhiteNoise(n, 0.2, 1), WhiteNoise(n, 0.2, 2));
  const fs::path path = TempPath("roundtrip_" + std::to_string(bits) + ".wav");
  SaveWav(in, path, format);
  const AudioBuffer out = LoadWav(path);
  const double step = bits > 0 ? std::ldexp(1.0, -(bits - 1)) : 1e-7;
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_LE(std::abs(out.channel(c)[i] - in.channel(c)[i]), step);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Formats, WavRoundtripTest,
                         ::testing::Values(std::pair{WavSampleFormat::kPcm16, 16},
                                           std::pair{WavSampleFormat::kPcm24, 24},
                                           std::pair{WavSampleFormat::kFloat32, 0}));

TEST(WavTest, HalfAmplitudeSine24Bit) {
  const AudioBuffer in = Mono(Sine(4800, 1000.0, 0.5));  // sample 12 is the crest
  const fs::path path = TempPath("half.wav");
  SaveWav(in, path);
  const AudioBuffer out = LoadWav(path);
  double peak = 0.0;
  for (double v : out.channel(0)) peak = std::max(peak, std::abs(v));
  EXPECT_NEAR(peak, 0.5, std::ldexp(1.0, -22));
}

TEST(WavTest, ClipsAndWarns) {
  std::vector<std::string> warnings;
  const WarningSink previous =
      SetWarningSink([&](const std::string& m) { warnings.push_back(m); });
  const fs::path path = TempPath("clip.wav");
  const WavWriteResult r = SaveWav(Mono({1.2, 0.0, -3.0}), path);
  SetWarningSink(previous);
  EXPECT_EQ(r.clipped_samples, 2u);
  ASSERT_EQ(warnings.size(), 1u);
  const AudioBuffer out = LoadWav(path);
  EXPECT_NEAR(out.channel(0)[0], 1.0, std::ldexp(1.0, -22));
  EXPECT_NEAR(out.channel(0)[2], -1.0, std::ldexp(1.0, -22));
}

TEST(WavTest, EmptyBufferRoundtrip) {
  const fs::path path = TempPath("empty.wav");
  SaveWav(Stereo({}, {}), path);
  EXPECT_EQ(fs::file_size(path), 44u);
  const AudioBuffer out = LoadWav(path);
  EXPECT_EQ(out.num_samples(), 0u);
  EXPECT_EQ(out.num_channels(), 2u);
}

TEST(WavTest, ErrorsAreTyped) {
  EXPECT_THROW(LoadWav(TempPath("does_not_exist.wav")), IoError);
  const fs::path garbage = TempPath("garbage.wav");
  std::ofstream(garbage) << "RIFF....not a wave file";
  EXPECT_THROW(LoadWav(garbage), ParseError);
  EXPECT_THROW(ParseWavSampleFormat("8"), ConfigError);
}

TEST(MidSideTest, IdenticalChannelsHaveNoSide) {
  const std::vector<double> x = WhiteNoise(512, 0.3, 3);
  const AudioBuffer ms = ToMidSide(Stereo(x, x));
  for (double v : ms.channel(1)) EXPECT_EQ(v, 0.0);
}

TEST(MidSideTest, Impulse) {
  const AudioBuffer ms = ToMidSide(Stereo({1.0, 0.0}, {0.0, 0.0}));
  EXPECT_NEAR(ms.channel(0)[0], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(ms.channel(1)[0], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(ms.channel(0)[1], 0.0);
}

TEST(MidSideTest, ZeroSideGivesEqualChannels) {
  const AudioBuffer lr = FromMidSide(Stereo({1.0, -0.5}, {0.0, 0.0}));
  EXPECT_NEAR(lr.channel(0)[0], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(lr.channel(0)[1], lr.channel(1)[1]);
  const AudioBuffer silent = FromMidSide(Stereo({0.0, 0.0}, {0.0, 0.0}));
  for (double v : silent.channel(0)) EXPECT_EQ(v, 0.0);
}

TEST(MidSideTest, RoundtripAndEnergy) {
  const AudioBuffer in = Stereo(WhiteNoise(4096, 0.4, 5), WhiteNoise(4096, 0.1, 6));
  const AudioBuffer ms = ToMidSide(in);
  const AudioBuffer back = FromMidSide(ms);
  double e_in = 0.0, e_ms = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < in.num_samples(); ++i) {
      ASSERT_NEAR(back.channel(c)[i], in.channel(c)[i], 1e-12);
      e_in += in.channel(c)[i] * in.channel(c)[i];
      e_ms += ms.channel(c)[i] * ms.channel(c)[i];
    }
  }
  EXPECT_NEAR(e_ms, e_in, 1e-12 * e_in);
}

TEST(MidSideTest, RejectsMono) {
  EXPECT_THROW(ToMidSide(Mono({0.0})), ArityError);
  EXPECT_THROW(FromMidSide(Mono({0.0})), ArityError);
}

TEST(FftTest, RoundtripAndParseval) {
  const std::vector<double> x = WhiteNoise(256, 1.0, 9);
  std::vector<std::complex<double>> spectrum(129);
  RealFft(x, spectrum);
  double time_energy = 0.0, freq_energy = 0.0;
  for (double v : x) time_energy += v * v;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double w = (k == 0 || k == 128) ? 1.0 : 2.0;
    freq_energy += w * std::norm(spectrum[k]);
  }
  EXPECT_NEAR(freq_energy / 256.0, time_energy, 1e-9 * time_energy);
  std::vector<double> back(256);
  InverseRealFft(spectrum, back);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back[i], x[i], 1e-12);
}

TEST(StftTest, ValidatesParameters) {
  EXPECT_THROW(ValidateStftParams({1000, 500}), ConfigError);
  EXPECT_THROW(ValidateStftParams({1024, 0}), ConfigError);
  EXPECT_THROW(ValidateStftParams({1024, 2048}), ConfigError);
  EXPECT_NO_THROW(ValidateStftParams({1024, 1024}));
}

TEST(StftTest, SineLandsInExpectedBin) {
  const Spectrogram s = Stft(Sine(kRate / 2, 1000.0, 0.5), kRate);
  EXPECT_EQ(s.num_bins(), 1025u);
  const auto frame = s.frame(s.num_frames() / 2);
  std::size_t best = 0;
  for (std::size_t k = 1; k < frame.size(); ++k) {
    if (std::abs(frame[k]) > std::abs(frame[best])) best = k;
  }
  EXPECT_EQ(best, 43u);
  EXPECT_NEAR(s.bin_frequency_hz(43), 43.0 * kRate / 2048.0, 1e-12);
}

TEST(StftTest, ParsevalWithWindowCompensation) {
  // Each frame obeys Parseval exactly, so the summed spectral energy equals the
  // signal energy weighted per sample by the squared windows covering it.
  const std::vector<double> x = WhiteNoise(kRate, 0.3, 11);
  const Spectrogram s = Stft(x, kRate);
  double spectral = 0.0;
  for (std::size_t t = 0; t < s.num_frames(); ++t) {
    const auto f = s.frame(t);
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double w = (k == 0 || k + 1 == f.size()) ? 1.0 : 2.0;
      spectral += w * std::norm(f[k]);
    }
  }
  const std::vector<double> window = HannWindow(s.window_length());
  double expected = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t padded = i + s.front_padding();
    double w2 = 0.0;
    for (std::size_t t = 0; t < s.num_frames(); ++t) {
      const std::size_t start = t * s.hop();
      if (padded >= start && padded < start + s.window_length()) {
        w2 += window[padded - start] * window[padded - start];
      }
    }
    expected += w2 * x[i] * x[i];
  }
  EXPECT_NEAR(spectral / s.window_length(), expected, 1e-6 * expected);
}

TEST(StftTest, RoundtripMusicFixture) {
  const std::vector<double> x = HarmonicTone(kRate, 220.0, 0.3);
  const std::vector<double> y = Istft(Stft(x, kRate));
  ASSERT_EQ(y.size(), x.size());
  double err = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) err += (y[i] - x[i]) * (y[i] - x[i]);
  EXPECT_LE(std::sqrt(err / x.size()), 1e-6);
}

TEST(StftTest, ShortInputIsPadded) {
  const Spectrogram s = Stft(std::vector<double>(100, 0.1), kRate);
  EXPECT_TRUE(s.zero_padded_short_input());
  const std::vector<double> y = Istft(s);
  ASSERT_EQ(y.size(), 100u);
  for (double v : y) EXPECT_NEAR(v, 0.1, 1e-12);
}

TEST(StftTest, OtherHopsRoundtrip) {
  const std::vector<double> x = WhiteNoise(10000, 0.5, 12);
  for (std::size_t hop : {128u, 256u, 512u}) {
    const std::vector<double> y = Istft(Stft(x, kRate, {1024, hop}));
    double err = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) err = std::max(err, std::abs(y[i] - x[i]));
    EXPECT_LE(err, 1e-9) << "hop " << hop;
  }
}

double ToneLevelDb(const AudioBuffer& b, std::size_t channel) {
  // RMS over the middle half to avoid edge transients.
  const auto x = b.channel(channel);
  const std::size_t lo = x.size() / 4, hi = 3 * x.size() / 4;
  double sum = 0.0;
  for (std::size_t i = lo; i < hi; ++i) sum += x[i] * x[i];
  return 10.0 * std::log10(sum / (hi - lo));
}

TEST(AnchorTest, LowpassPassbandAndStopband) {
  const std::size_t n = kRate / 2;
  const AudioBuffer pass = Stereo(Sine(n, 1000.0, 0.5), Sine(n, 1000.0, 0.5));
  const AudioBuffer stop = Stereo(Sine(n, 10000.0, 0.5), Sine(n, 10000.0, 0.5));
  EXPECT_LE(std::abs(ToneLevelDb(LowpassAnchor(pass, 3500.0), 0) - ToneLevelDb(pass, 0)), 0.5);
  EXPECT_LE(ToneLevelDb(LowpassAnchor(stop, 3500.0), 0) - ToneLevelDb(stop, 0), -40.0);
  EXPECT_LE(ToneLevelDb(LowpassAnchor(stop, 7000.0), 0) - ToneLevelDb(stop, 0), -40.0);
}

TEST(AnchorTest, LowpassPreservesDcAndAlignment) {
  const std::size_t n = 20000;
  const AudioBuffer dc = Mono(std::vector<double>(n, 0.25));
  EXPECT_LE(std::abs(ToneLevelDb(LowpassAnchor(dc, 3500.0), 0) - ToneLevelDb(dc, 0)), 0.5);
  std::vector<double> impulse(n, 0.0);
  impulse[n / 2] = 1.0;
  const AudioBuffer out = LowpassAnchor(Mono(impulse), 7000.0);
  const auto y = out.channel(0);
  const auto peak = std::max_element(y.begin(), y.end()) - y.begin();
  EXPECT_EQ(static_cast<std::size_t>(peak), n / 2);
  EXPECT_THROW(LowpassAnchor(dc, 30000.0), DomainError);
}

TEST(AnchorTest, FirDesignMeetsRipple) {
  const std::vector<double> taps = DesignLowpassFir(3500.0, kRate);
  ASSERT_EQ(taps.size() % 2, 1u);
  double dc = 0.0;
  for (double t : taps) dc += t;
  EXPECT_NEAR(dc, 1.0, 1e-12);
}

TEST(AnchorTest, MonoAnchor) {
  const std::vector<double> x = WhiteNoise(1000, 0.3, 13);
  std::vector<double> neg(x.size());
  std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
  const AudioBuffer cancelled = MonoAnchor(Stereo(x, neg));
  for (double v : cancelled.channel(0)) EXPECT_EQ(v, 0.0);
  const AudioBuffer same = Stereo(x, x);
  EXPECT_EQ(MonoAnchor(same), same);
  EXPECT_THROW(MonoAnchor(Mono(x)), ArityError);
}

TEST(CsvTest, QuotedFieldsRoundtrip) {
  std::ostringstream out;
  WriteCsvRow(out, {"a", "b,c", "say \"hi\"", "line\nbreak"});
  std::istringstream in("h1,h2,h3,h4\n" + out.str());
  const CsvTable t = ParseCsv(in);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][1], "b,c");
  EXPECT_EQ(t.rows[0][2], "say \"hi\"");
  EXPECT_EQ(t.rows[0][3], "line\nbreak");
  EXPECT_EQ(t.column("h3"), 2u);
  EXPECT_FALSE(t.column("nope"));
}

TEST(CsvTest, Errors) {
  std::istringstream ragged("a,b\n1\n");
  EXPECT_THROW(ParseCsv(ragged), ParseError);
  std::istringstream open_quote("a\n\"x\n");
  EXPECT_THROW(ParseCsv(open_quote), ParseError);
  EXPECT_THROW(ParseDouble("1.5x", "test"), ParseError);
  EXPECT_DOUBLE_EQ(ParseDouble(" +2.5 ", "test"), 2.5);
}

TEST(CsvTest, FormatDoubleRoundtrips) {
  for (double v : {0.1, 1.0 / 3.0, -1e-300, 123456789.125}) {
    EXPECT_EQ(ParseDouble(FormatDouble(v), "test"), v);
  }
  EXPECT_EQ(FormatDouble(std::nan("")), "nan");
}

TEST(RngTest, FixedSequence) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    const double x = a.Gaussian();
    EXPECT_EQ(x, b.Gaussian());
  }
  Rng u(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.Uniform();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
    ASSERT_LT(u.Below(7), 7u);
  }
  EXPECT_NE(DeriveSeed(1, "QNLR_Q1"), DeriveSeed(1, "QNLR_Q2"));
  EXPECT_EQ(DeriveSeed(1, "QNLR_Q1"), DeriveSeed(1, "QNLR_Q1"));
}

}  // namespace
}  // namespace stereoqa
