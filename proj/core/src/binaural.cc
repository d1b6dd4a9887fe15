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

#include "stereoqa/binaural.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>

#include "stereoqa/csv.h"
#include "stereoqa/error.h"
#include "stereoqa/fft.h"

namespace stereoqa {

BandSpec BandSpec::LogSpaced(double low_hz, double high_hz, std::size_t count) {
  if (!(low_hz > 0.0) || !(high_hz > low_hz) || count == 0) {
    throw ConfigError("log-spaced bands need 0 < low < high and count > 0");
  }
  BandSpec spec;
  for (std::size_t i = 0; i <= count; ++i) {
    spec.edges_hz.push_back(
        low_hz * std::pow(high_hz / low_hz, static_cast<double>(i) / count));
  }
  return spec;
}

namespace {

// Relative width of the raised-cosine skirts outside each band edge.
constexpr double kSkirt = 0.1;

double BandGain(double hz, double low_hz, double high_hz) {
  if (hz >= low_hz && hz <= high_hz) return 1.0;
  const double lo_start = low_hz * (1.0 - kSkirt);
  const double hi_end = high_hz * (1.0 + kSkirt);
  if (hz < low_hz && hz > lo_start) {
    return 0.5 - 0.5 * std::cos(std::numbers::pi * (hz - lo_start) /
                                (low_hz - lo_start));
  }
  if (hz > high_hz && hz < hi_end) {
    return 0.5 + 0.5 * std::cos(std::numbers::pi * (hz - high_hz) /
                                (hi_end - high_hz));
  }
  return 0.0;
}

}  // namespace

namespace {

// Holds the padded spectrum of one signal so several bands can be cut from a
// single forward transform.
class BandSplitter {
 public:
  BandSplitter(std::span<const double> signal, int sample_rate_hz)
      : length_(signal.size()), rate_(sample_rate_hz) {
    if (signal.empty()) return;
    // Generous zero padding keeps the circular wrap of the filter tails away
    // from the signal.
    n_ = std::bit_ceil(signal.size() + 8192);
    std::vector<double> padded(n_, 0.0);
    std::copy(signal.begin(), signal.end(), padded.begin());
    spectrum_.resize(n_ / 2 + 1);
    RealFft(padded, spectrum_);
  }

  std::vector<double> Band(double low_hz, double high_hz) const {
    if (length_ == 0) return {};
    std::vector<std::complex<double>> band(spectrum_.size());
    for (std::size_t k = 0; k < band.size(); ++k) {
      const double hz = static_cast<double>(k) * rate_ / static_cast<double>(n_);
      band[k] = spectrum_[k] * BandGain(hz, low_hz, high_hz);
    }
    std::vector<double> out(n_);
    InverseRealFft(band, out);
    out.resize(length_);
    return out;
  }

 private:
  std::size_t length_;
  int rate_;
  std::size_t n_ = 0;
  std::vector<std::complex<double>> spectrum_;
};

}  // namespace

std::vector<double> ZeroPhaseBandpass(std::span<const double> signal,
                                      int sample_rate_hz, double low_hz,
                                      double high_hz) {
  return BandSplitter(signal, sample_rate_hz).Band(low_hz, high_hz);
}

BinauralCueTrack ExtractCues(const AudioBuffer& buffer, const CueParams& params) {
  RequireStereo(buffer, "binaural cue extraction");
  if (params.bands.num_bands() == 0) throw ConfigError("no analysis bands");
  if (!(params.frame_ms > 0.0) || !(params.overlap >= 0.0 && params.overlap < 1.0)) {
    throw ConfigError("frame length must be positive and overlap in [0, 1)");
  }
  const int rate = buffer.sample_rate_hz();
  const std::size_t length = buffer.num_samples();
  const auto frame_len = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(params.frame_ms * rate / 1000.0)));
  const auto hop = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(frame_len * (1.0 - params.overlap))));
  const std::size_t frames =
      length >= frame_len ? (length - frame_len) / hop + 1 : 1;
  const auto max_lag = static_cast<std::ptrdiff_t>(
      std::floor(params.max_lag_ms * rate / 1000.0 + 1e-9));
  const std::size_t bands = params.bands.num_bands();

  BinauralCueTrack track;
  track.ild_db = BandMatrix(frames, bands);
  track.itd_us = BandMatrix(frames, bands);
  track.iacc = BandMatrix(frames, bands);
  track.energy = BandMatrix(frames, bands);
  track.valid.assign(frames * bands, false);
  track.frame_ms = params.frame_ms;
  track.hop_samples = hop;
  track.band_edges_hz = params.bands.edges_hz;

  // Band signals are embedded in zeros so every lagged read is in range.
  const auto margin = static_cast<std::size_t>(max_lag) + 1;
  const std::size_t extended = margin + std::max(length, frame_len) + margin;
  const std::size_t lags = 2 * static_cast<std::size_t>(max_lag) + 1;
  std::vector<double> rho(lags);
  const std::size_t local_span = frame_len + 2 * margin;
  std::vector<double> left_prefix(local_span + 1, 0.0);
  std::vector<double> right_prefix(local_span + 1, 0.0);

  const BandSplitter left_split(buffer.channel(0), rate);
  const BandSplitter right_split(buffer.channel(1), rate);
  for (std::size_t band = 0; band < bands; ++band) {
    const double lo = params.bands.edges_hz[band];
    const double hi = params.bands.edges_hz[band + 1];
    std::vector<double> left(extended, 0.0);
    std::vector<double> right(extended, 0.0);
    {
      const auto l = left_split.Band(lo, hi);
      const auto r = right_split.Band(lo, hi);
      std::copy(l.begin(), l.end(), left.begin() + margin);
      std::copy(r.begin(), r.end(), right.begin() + margin);
    }

    std::vector<double> left_energy(frames);
    std::vector<double> right_energy(frames);
    double peak = 0.0;
    for (std::size_t t = 0; t < frames; ++t) {
      const double* l = left.data() + margin + t * hop;
      const double* r = right.data() + margin + t * hop;
      double el = 0.0;
      double er = 0.0;
      for (std::size_t n = 0; n < frame_len; ++n) {
        el += l[n] * l[n];
        er += r[n] * r[n];
      }
      track.energy.at(t, band) = el + er;
      peak = std::max(peak, el + er);

      // Running energies of both channels around the frame, so the lagged
      // energies cost O(1) per lag.
      const double* lbase = l - margin;
      const double* rbase = r - margin;
      for (std::size_t i = 0; i < local_span; ++i) {
        left_prefix[i + 1] = left_prefix[i] + lbase[i] * lbase[i];
        right_prefix[i + 1] = right_prefix[i] + rbase[i] * rbase[i];
      }

      // The lag is split between both channels (left shifted back by
      // floor(lag/2), right forward by the rest) so that swapping the
      // channels mirrors the correlation function exactly.
      for (std::ptrdiff_t lag = -max_lag; lag <= max_lag; ++lag) {
        const std::ptrdiff_t a = lag >= 0 ? lag / 2 : -((-lag + 1) / 2);
        const std::ptrdiff_t b = lag - a;
        const double* ls = l - a;
        const double* rs = r + b;
        double acc[4] = {0.0, 0.0, 0.0, 0.0};
        std::size_t n = 0;
        for (; n + 4 <= frame_len; n += 4) {
          acc[0] += ls[n] * rs[n];
          acc[1] += ls[n + 1] * rs[n + 1];
          acc[2] += ls[n + 2] * rs[n + 2];
          acc[3] += ls[n + 3] * rs[n + 3];
        }
        for (; n < frame_len; ++n) acc[0] += ls[n] * rs[n];
        const double cross = (acc[0] + acc[1]) + (acc[2] + acc[3]);
        const auto l0 = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(margin) - a);
        const auto r0 = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(margin) + b);
        const double ll = left_prefix[l0 + frame_len] - left_prefix[l0];
        const double rr = right_prefix[r0 + frame_len] - right_prefix[r0];
        const double denom = std::sqrt(std::max(ll, 0.0) * std::max(rr, 0.0));
        rho[static_cast<std::size_t>(lag + max_lag)] =
            denom > 0.0 ? std::min(std::abs(cross) / denom, 1.0) : 0.0;
      }
      std::size_t best = 0;
      for (std::size_t k = 1; k < lags; ++k) {
        if (rho[k] > rho[best]) best = k;
      }
      double offset = 0.0;
      if (best > 0 && best + 1 < lags) {
        const double y0 = rho[best - 1];
        const double y1 = rho[best];
        const double y2 = rho[best + 1];
        const double curvature = y0 - 2.0 * y1 + y2;
        if (curvature < 0.0) {
          offset = std::clamp(0.5 * (y0 - y2) / curvature, -0.5, 0.5);
        }
      }
      const double lag_samples =
          static_cast<double>(static_cast<std::ptrdiff_t>(best) - max_lag) + offset;
      track.iacc.at(t, band) = std::clamp(rho[best], 0.0, 1.0);
      track.itd_us.at(t, band) =
          std::clamp(lag_samples * 1e6 / rate, -kMaxItdUs, kMaxItdUs);
      left_energy[t] = el;
      right_energy[t] = er;
    }

    const double epsilon = std::max(peak * 1e-12, std::numeric_limits<double>::min());
    const double gate = peak * std::pow(10.0, -params.energy_gate_db / 10.0);
    for (std::size_t t = 0; t < frames; ++t) {
      const double total = track.energy.at(t, band);
      track.ild_db.at(t, band) = 10.0 * std::log10(
          (left_energy[t] + epsilon) / (right_energy[t] + epsilon));
      track.valid[t * bands + band] = total > 0.0 && total >= gate;
    }
  }
  return track;
}

CueDistortion ComputeCueDistortion(const BinauralCueTrack& reference,
                                   const BinauralCueTrack& test) {
  if (reference.num_frames() != test.num_frames() ||
      reference.num_bands() != test.num_bands()) {
    throw ShapeError("cue tracks differ in frame/band geometry");
  }
  double weight_sum = 0.0;
  CueDistortion d;
  for (std::size_t t = 0; t < reference.num_frames(); ++t) {
    for (std::size_t b = 0; b < reference.num_bands(); ++b) {
      const bool ref_valid = reference.is_valid(t, b);
      if (!ref_valid && !test.is_valid(t, b)) continue;
      const double w = ref_valid ? reference.energy.at(t, b) : 0.0;
      d.d_ild_db += w * std::abs(reference.ild_db.at(t, b) - test.ild_db.at(t, b));
      d.d_itd_us += w * std::abs(reference.itd_us.at(t, b) - test.itd_us.at(t, b));
      d.d_iacc += w * std::abs(reference.iacc.at(t, b) - test.iacc.at(t, b));
      weight_sum += w;
    }
  }
  if (weight_sum <= 0.0) return {};
  d.d_ild_db /= weight_sum;
  d.d_itd_us /= weight_sum;
  d.d_iacc /= weight_sum;
  return d;
}

double BinauralQuality(const CueDistortion& distortion,
                       const BinauralWeights& weights) {
  if (weights.ild < 0.0 || weights.itd < 0.0 || weights.iacc < 0.0) {
    throw ConfigError("binaural weights must be non-negative");
  }
  return -(weights.ild * distortion.d_ild_db +
           weights.itd * distortion.d_itd_us / 100.0 +
           weights.iacc * distortion.d_iacc * 10.0);
}

void WriteCueTrackCsv(const BinauralCueTrack& track,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  WriteCsvRow(out, {"frame", "band", "ild", "itd", "iacc", "energy", "valid"});
  for (std::size_t t = 0; t < track.num_frames(); ++t) {
    for (std::size_t b = 0; b < track.num_bands(); ++b) {
      WriteCsvRow(out, {std::to_string(t), std::to_string(b),
                        FormatDouble(track.ild_db.at(t, b)),
                        FormatDouble(track.itd_us.at(t, b)),
                        FormatDouble(track.iacc.at(t, b)),
                        FormatDouble(track.energy.at(t, b)),
                        track.is_valid(t, b) ? "1" : "0"});
    }
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace stereoqa
