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

#ifndef STEREOQA_BINAURAL_H_
#define STEREOQA_BINAURAL_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "stereoqa/audio_buffer.h"
#include "stereoqa/masking.h"

namespace stereoqa {

inline constexpr double kMaxItdUs = 1100.0;

// Analysis bands as [lower, upper) edge pairs in Hz.
struct BandSpec {
  std::vector<double> edges_hz;  // num_bands + 1 ascending edges

  std::size_t num_bands() const {
    return edges_hz.empty() ? 0 : edges_hz.size() - 1;
  }
  // `count` logarithmically spaced bands between the two edges.
  static BandSpec LogSpaced(double low_hz, double high_hz, std::size_t count);
  // 10 bands from 100 Hz to 12.8 kHz.
  static BandSpec Default() { return LogSpaced(100.0, 12800.0, 10); }
};

struct CueParams {
  double frame_ms = 20.0;
  double overlap = 0.5;
  BandSpec bands = BandSpec::Default();
  double max_lag_ms = kMaxItdUs / 1000.0;
  // Cells whose L+R energy is more than this far below the per-band peak
  // are invalid.
  double energy_gate_db = 50.0;
};

// Frame x band interaural cues. Positive ITD means the right channel lags,
// positive ILD means the left channel is louder.
struct BinauralCueTrack {
  BandMatrix ild_db;
  BandMatrix itd_us;
  BandMatrix iacc;
  BandMatrix energy;  // E_L + E_R per cell
  std::vector<bool> valid;  // row-major frames x bands
  double frame_ms = 0.0;
  std::size_t hop_samples = 0;
  std::vector<double> band_edges_hz;

  std::size_t num_frames() const { return ild_db.num_frames(); }
  std::size_t num_bands() const { return ild_db.num_bands(); }
  bool is_valid(std::size_t frame, std::size_t band) const {
    return valid[frame * num_bands() + band];
  }
};

// Zero-phase band split, then per frame and band: ILD from band energies,
// IACC as the maximum |normalised cross-correlation| within +-max_lag and ITD
// at that lag refined by parabolic interpolation. Throws ArityError for mono
// input.
BinauralCueTrack ExtractCues(const AudioBuffer& buffer,
                             const CueParams& params = {});

// Zero-phase (real, symmetric response) FFT band-pass of a whole signal.
std::vector<double> ZeroPhaseBandpass(std::span<const double> signal,
                                      int sample_rate_hz, double low_hz,
                                      double high_hz);

struct CueDistortion {
  double d_ild_db = 0.0;
  double d_itd_us = 0.0;
  double d_iacc = 0.0;
};

// Energy-weighted mean absolute cue deviations over the union of valid
// cells, weighted by the reference cell energy (zero where the reference cell
// is invalid). Throws ShapeError on a frame/band geometry mismatch.
CueDistortion ComputeCueDistortion(const BinauralCueTrack& reference,
                                   const BinauralCueTrack& test);

struct BinauralWeights {
  double ild = 1.0;
  double itd = 1.0;
  double iacc = 1.0;
};

// -(w_ild d_ild + w_itd d_itd / 100 + w_iacc d_iacc 10); 0 means transparent.
// Throws ConfigError for negative weights.
double BinauralQuality(const CueDistortion& distortion,
                       const BinauralWeights& weights = {});

// CSV with columns frame,band,ild,itd,iacc,energy,valid.
void WriteCueTrackCsv(const BinauralCueTrack& track,
                      const std::filesystem::path& path);

}  // namespace stereoqa

#endif  // STEREOQA_BINAURAL_H_
