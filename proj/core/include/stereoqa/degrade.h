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

#ifndef STEREOQA_DEGRADE_H_
#define STEREOQA_DEGRADE_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stereoqa/audio_buffer.h"
#include "stereoqa/masking.h"

namespace stereoqa {

enum class Artifact { kQuantizationNoise, kSpectralHoles };
enum class StereoMode { kLeftRight, kMidSide };
// Q1 is the worst quality level, Q5 the best.
enum class QualityLevel { kQ1 = 1, kQ2, kQ3, kQ4, kQ5 };

std::string_view ArtifactCode(Artifact artifact);   // "QN" / "SH"
std::string_view StereoModeCode(StereoMode mode);   // "LR" / "MS"
std::string QualityLevelCode(QualityLevel level);   // "Q1".."Q5"
QualityLevel ParseQualityLevel(std::string_view code);

struct TreatmentSpec {
  Artifact artifact = Artifact::kQuantizationNoise;
  StereoMode mode = StereoMode::kLeftRight;
  QualityLevel level = QualityLevel::kQ3;
  std::uint64_t seed = 0;
  // Diagnostic: use `seed` for both channels instead of seed and seed ^ 1.
  bool share_channel_seed = false;

  // e.g. "QNLR_Q3"
  std::string ConditionLabel() const;
};

struct QualityLevelParams {
  double qn_target_nmr_db;
  double sh_hole_density;
  int sh_hole_width_bands;
};

// Parameter rows for Q1..Q5.
class QualityLevelTable {
 public:
  // QN {+12, +6, 0, -6, -12} dB; SH density {0.4, 0.3, 0.2, 0.1, 0.05},
  // width 4 bands.
  QualityLevelTable();
  // Throws ConfigError unless NMR targets and hole densities strictly
  // decrease from Q1 to Q5.
  explicit QualityLevelTable(std::array<QualityLevelParams, 5> rows);

  const QualityLevelParams& at(QualityLevel level) const {
    return rows_[static_cast<int>(level) - 1];
  }

 private:
  std::array<QualityLevelParams, 5> rows_;
};

struct QuantizationNoiseOptions {
  // Level interpretation shared with the NMR measurement.
  MaskingModel model;
  // Correction passes that re-analyse the synthesised noise and rescale each
  // frame/band cell towards its target energy.
  int refinement_passes = 8;
};

// Adds seeded noise whose band power in every active frame is
// threshold * 10^(target/10) of `channel`'s masking threshold. Frames excluded
// by the silence gate receive noise at threshold in quiet + min(0, target).
std::vector<double> ApplyQuantizationNoise(
    std::span<const double> channel, int sample_rate_hz, double target_nmr_db,
    std::uint64_t seed, const QuantizationNoiseOptions& options = {});

struct SpectralHoleOptions {
  StftParams stft;
  double low_hz = 200.0;
  double high_hz = 16000.0;
  // STFT bins per hole band.
  std::size_t bins_per_band = 8;
  // Holes drawn once and kept for every frame instead of per frame.
  bool persistent = false;
  // The output is the signal closest to the input whose own STFT is zero on
  // the holes, found by conjugate gradients on the hole coefficients. The
  // solve stops once the hole energy has fallen by solver_tolerance^2
  // (-60 dB) or after solver_iterations steps.
  int solver_iterations = 1500;
  double solver_tolerance = 1e-3;
};

// Hole-band layout of the 200 Hz..16 kHz region for an STFT geometry.
struct HoleBands {
  std::size_t first_bin = 0;
  std::size_t bins_per_band = 0;
  std::size_t num_bands = 0;
};
HoleBands MakeHoleBands(const StftParams& stft, int sample_rate_hz,
                        const SpectralHoleOptions& options);

// Per frame, the hole bands chosen by `seed`: round(density * num_bands)
// bands in groups of `width` contiguous bands. Row-major frames x bands.
std::vector<bool> DrawHolePattern(std::size_t num_frames,
                                  std::size_t num_bands, double density,
                                  int width, std::uint64_t seed,
                                  bool persistent);

// The pattern ApplySpectralHoles uses for a signal of `num_samples`: the drawn
// pattern with frames that reach into the STFT zero padding left intact.
std::vector<bool> AppliedHolePattern(std::size_t num_samples, int sample_rate_hz,
                                     double density, int width, std::uint64_t seed,
                                     const SpectralHoleOptions& options = {});

std::vector<double> ApplySpectralHoles(std::span<const double> channel,
                                       int sample_rate_hz, double hole_density,
                                       int hole_width_bands, std::uint64_t seed,
                                       const SpectralHoleOptions& options = {});

struct DegradeOptions {
  QualityLevelTable table;
  QuantizationNoiseOptions qn;
  SpectralHoleOptions sh;
};

// LR: artifact on L (seed) and R (seed ^ 1). MS: on M (seed) and S (seed ^ 1)
// between ToMidSide and FromMidSide. Throws ArityError for mono input.
AudioBuffer ApplyTreatment(const AudioBuffer& buffer, const TreatmentSpec& spec,
                           const DegradeOptions& options = {});

enum class Experiment { kQNLR, kQNMS, kSHLR, kSHMS, kQNmix, kSHmix };

std::string_view ExperimentName(Experiment experiment);
// Throws ConfigError for an unknown label.
Experiment ParseExperiment(std::string_view label);
const std::array<Experiment, 6>& AllExperiments();
bool IsMixExperiment(Experiment experiment);

inline constexpr std::string_view kHiddenReference = "hidden_reference";
inline constexpr std::string_view kLowpass3500 = "lp3500";
inline constexpr std::string_view kLowpass7000 = "lp7000";
inline constexpr std::string_view kMonoAnchor = "mono";

struct Condition {
  std::string label;                      // e.g. "QNMS_Q2", "lp3500"
  std::optional<TreatmentSpec> treatment;  // set for treatment conditions
  AudioBuffer audio;
};

struct ConditionSetOptions {
  DegradeOptions degrade;
  // Levels of each mode presented in mix trials.
  std::array<QualityLevel, 2> mix_levels{QualityLevel::kQ2, QualityLevel::kQ4};
  std::uint64_t base_seed = 0;
};

// Seed of a treatment condition: derived from the base seed and the
// condition label only, so the same condition is identical in every
// experiment it appears in.
std::uint64_t TreatmentSeed(std::uint64_t base_seed, Artifact artifact,
                            StereoMode mode, QualityLevel level);

// Homogeneous experiments: Q1..Q5 in one mode, both lowpass anchors and the
// hidden reference. Mix experiments: two levels per mode, lowpass anchors, a
// mono anchor and the hidden reference.
std::vector<Condition> BuildConditionSet(const AudioBuffer& reference,
                                         Experiment experiment,
                                         const ConditionSetOptions& options = {});
// Condition audio by label. Share one cache only between calls with the same
// reference and options; conditions found in it are not recomputed.
using ConditionCache = std::map<std::string, AudioBuffer>;
std::vector<Condition> BuildConditionSet(const AudioBuffer& reference,
                                         Experiment experiment,
                                         const ConditionSetOptions& options,
                                         ConditionCache& cache);

// "<item>__<artifact><mode>__<level>.wav" for treatments,
// "<item>__<label>.wav" otherwise.
std::string ConditionFileName(std::string_view item, const Condition& condition);

}  // namespace stereoqa

#endif  // STEREOQA_DEGRADE_H_
