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

#include "stereoqa/degrade.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "stereoqa/anchors.h"
#include "stereoqa/error.h"
#include "stereoqa/fft.h"
#include "stereoqa/mid_side.h"
#include "stereoqa/rng.h"
#include "stereoqa/stft.h"

namespace stereoqa {

std::string_view ArtifactCode(Artifact artifact) {
  return artifact == Artifact::kQuantizationNoise ? "QN" : "SH";
}

std::string_view StereoModeCode(StereoMode mode) {
  return mode == StereoMode::kLeftRight ? "LR" : "MS";
}

std::string QualityLevelCode(QualityLevel level) {
  return "Q" + std::to_string(static_cast<int>(level));
}

QualityLevel ParseQualityLevel(std::string_view code) {
  if (code.size() == 2 && code[0] == 'Q' && code[1] >= '1' && code[1] <= '5') {
    return static_cast<QualityLevel>(code[1] - '0');
  }
  throw ConfigError("unknown quality level '" + std::string(code) + "'");
}

std::string TreatmentSpec::ConditionLabel() const {
  return std::string(ArtifactCode(artifact)) + std::string(StereoModeCode(mode)) +
         "_" + QualityLevelCode(level);
}

QualityLevelTable::QualityLevelTable()
    : QualityLevelTable({{{12.0, 0.40, 4},
                          {6.0, 0.30, 4},
                          {0.0, 0.20, 4},
                          {-6.0, 0.10, 4},
                          {-12.0, 0.05, 4}}}) {}

QualityLevelTable::QualityLevelTable(std::array<QualityLevelParams, 5> rows)
    : rows_(rows) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& row = rows_[i];
    if (row.sh_hole_density < 0.0 || row.sh_hole_density > 1.0 ||
        row.sh_hole_width_bands < 1) {
      throw ConfigError("hole density must be in [0, 1] and width >= 1");
    }
    if (i > 0 && !(row.qn_target_nmr_db < rows_[i - 1].qn_target_nmr_db &&
                   row.sh_hole_density < rows_[i - 1].sh_hole_density)) {
      throw ConfigError(
          "quality table must degrade strictly from Q5 (best) to Q1 (worst)");
    }
  }
}

std::vector<double> ApplyQuantizationNoise(std::span<const double> channel,
                                           int sample_rate_hz,
                                           double target_nmr_db,
                                           std::uint64_t seed,
                                           const QuantizationNoiseOptions& options) {
  std::vector<double> out(channel.begin(), channel.end());
  if (channel.empty()) return out;
  const MaskingModel& model = options.model;
  const Spectrogram spec = Stft(channel, sample_rate_hz, model.stft);
  const MaskingThreshold mask = ComputeMaskingThreshold(spec, model);
  const std::vector<bool> active = ActiveFrames(spec, model);
  const BarkPartition partition(model.stft.window_length, sample_rate_hz);

  BandMatrix target(spec.num_frames(), kNumBarkBands);
  for (std::size_t t = 0; t < spec.num_frames(); ++t) {
    for (std::size_t b = 0; b < kNumBarkBands; ++b) {
      const double level_db =
          active[t] ? mask.threshold_db.at(t, b) + target_nmr_db
                    : mask.threshold_in_quiet_db[b] + std::min(0.0, target_nmr_db);
      target.at(t, b) = SplDbToPower(level_db, model);
    }
  }

  Rng rng(seed);
  std::vector<double> white(channel.size());
  for (double& v : white) v = rng.Gaussian();
  Spectrogram noise = Stft(white, sample_rate_hz, model.stft);

  // Shape every frame/band cell to its target power. Overlap-add smears
  // energy between neighbouring frames, so the synthesised noise is
  // re-analysed and the cell gains corrected a few times.
  auto shape = [&](Spectrogram& s) {
    const BandMatrix power = BarkBandPowers(s, partition);
    for (std::size_t t = 0; t < s.num_frames(); ++t) {
      auto frame = s.frame(t);
      for (std::size_t k = 0; k < frame.size(); ++k) {
        const std::size_t b = partition.band_of_bin(k);
        const double p = power.at(t, b);
        frame[k] *= p > 0.0 ? std::sqrt(target.at(t, b) / p) : 0.0;
      }
    }
  };
  shape(noise);
  std::vector<double> shaped = Istft(noise);
  for (int pass = 0; pass < options.refinement_passes; ++pass) {
    Spectrogram reanalysed = Stft(shaped, sample_rate_hz, model.stft);
    shape(reanalysed);
    shaped = Istft(reanalysed);
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += shaped[i];
  return out;
}

HoleBands MakeHoleBands(const StftParams& stft, int sample_rate_hz,
                        const SpectralHoleOptions& options) {
  if (options.bins_per_band == 0) throw ConfigError("bins_per_band must be > 0");
  const double bin_hz = static_cast<double>(sample_rate_hz) / stft.window_length;
  const std::size_t last_bin = stft.window_length / 2;
  HoleBands bands;
  bands.bins_per_band = options.bins_per_band;
  bands.first_bin = static_cast<std::size_t>(std::ceil(options.low_hz / bin_hz));
  const auto end_bin = std::min<std::size_t>(
      last_bin, static_cast<std::size_t>(std::floor(options.high_hz / bin_hz)));
  if (end_bin > bands.first_bin) {
    bands.num_bands = (end_bin - bands.first_bin + 1) / options.bins_per_band;
  }
  return bands;
}

std::vector<bool> DrawHolePattern(std::size_t num_frames, std::size_t num_bands,
                                  double density, int width, std::uint64_t seed,
                                  bool persistent) {
  if (density < 0.0 || density > 1.0) {
    throw ConfigError("hole density must be in [0, 1]");
  }
  std::vector<bool> pattern(num_frames * num_bands, false);
  const auto count = static_cast<std::size_t>(
      std::lround(density * static_cast<double>(num_bands)));
  if (count == 0 || num_bands == 0) return pattern;
  const std::size_t group = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(width, 1)), 1, num_bands);
  const std::size_t slots = num_bands / group;
  const std::size_t groups = std::min(slots, (count + group - 1) / group);

  Rng rng(seed);
  std::vector<std::size_t> order(slots);
  std::vector<bool> row(num_bands);
  for (std::size_t t = 0; t < num_frames; ++t) {
    if (t == 0 || !persistent) {
      for (std::size_t i = 0; i < slots; ++i) order[i] = i;
      // Partial Fisher-Yates: the first `groups` entries are the pick.
      for (std::size_t i = 0; i < groups; ++i) {
        std::swap(order[i], order[i + rng.Below(slots - i)]);
      }
      std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(groups));
      row.assign(num_bands, false);
      std::size_t remaining = count;
      for (std::size_t g = 0; g < groups && remaining > 0; ++g) {
        const std::size_t take = std::min(group, remaining);
        for (std::size_t i = 0; i < take; ++i) row[order[g] * group + i] = true;
        remaining -= take;
      }
    }
    for (std::size_t b = 0; b < num_bands; ++b) {
      pattern[t * num_bands + b] = row[b];
    }
  }
  return pattern;
}

namespace {

using Coefficients = std::vector<std::complex<double>>;

double RealDot(std::span<const std::complex<double>> a,
               std::span<const std::complex<double>> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  }
  return sum;
}

// A maps a signal to its STFT coefficients on the hole cells. Coefficients
// are complex; the inner product is the real one, so A^T is the windowed
// overlap-add of the coefficients' real inverse transform. Only frames lying
// entirely inside the signal carry holes.
class HoleSystem {
 public:
  HoleSystem(const StftParams& stft, std::size_t length, const HoleBands& bands,
             const std::vector<bool>& pattern)
      : n_(stft.window_length),
        hop_(stft.hop),
        length_(length),
        window_(HannWindow(stft.window_length)),
        spectrum_(stft.window_length / 2 + 1),
        buffer_(stft.window_length) {
    const std::size_t frames = bands.num_bands == 0 ? 0 : pattern.size() / bands.num_bands;
    for (std::size_t t = 0; t < frames; ++t) {
      Frame frame{t, offset_, {}};
      for (std::size_t b = 0; b < bands.num_bands; ++b) {
        if (!pattern[t * bands.num_bands + b]) continue;
        const std::size_t first = bands.first_bin + b * bands.bins_per_band;
        for (std::size_t k = first; k < first + bands.bins_per_band; ++k) {
          frame.bins.push_back(k);
        }
      }
      if (frame.bins.empty()) continue;
      offset_ += frame.bins.size();
      frames_.push_back(std::move(frame));
    }
  }

  std::size_t size() const { return offset_; }
  bool empty() const { return frames_.empty(); }

  Coefficients Apply(std::span<const double> signal) {
    Coefficients out(offset_);
    for (const Frame& f : frames_) ApplyFrame(f, signal, Slice(out, f));
    return out;
  }

  std::vector<double> Adjoint(const Coefficients& coeffs) {
    std::vector<double> out(length_, 0.0);
    for (const Frame& f : frames_) AddAdjointFrame(f, Slice(coeffs, f), out);
    return out;
  }

  // Symmetric block Gauss-Seidel sweep on A A^T, one block per frame.
  Coefficients Precondition(const Coefficients& r) {
    Coefficients y(offset_);
    std::vector<double> partial(length_, 0.0);
    Coefficients local;
    for (const Frame& f : frames_) {
      local.resize(f.bins.size());
      ApplyFrame(f, partial, local);
      auto yt = Slice(y, f);
      const auto rt = Slice(r, f);
      for (std::size_t i = 0; i < local.size(); ++i) yt[i] = rt[i] - local[i];
      SolveDiagonal(f, yt);
      AddAdjointFrame(f, yt, partial);
    }
    Coefficients z = y;
    std::fill(partial.begin(), partial.end(), 0.0);
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
      const Frame& f = *it;
      local.resize(f.bins.size());
      ApplyFrame(f, partial, local);
      SolveDiagonal(f, local);
      auto zt = Slice(z, f);
      for (std::size_t i = 0; i < local.size(); ++i) zt[i] -= local[i];
      AddAdjointFrame(f, zt, partial);
    }
    return z;
  }

 private:
  struct Frame {
    std::size_t index;
    std::size_t offset;
    std::vector<std::size_t> bins;
  };

  static std::span<std::complex<double>> Slice(Coefficients& c, const Frame& f) {
    return {c.data() + f.offset, f.bins.size()};
  }
  static std::span<const std::complex<double>> Slice(const Coefficients& c,
                                                     const Frame& f) {
    return {c.data() + f.offset, f.bins.size()};
  }

  // Signal index of window sample i of frame f (frames are interior).
  std::size_t SampleIndex(const Frame& f, std::size_t i) const {
    return f.index * hop_ + i - n_ / 2;
  }

  void ApplyFrame(const Frame& f, std::span<const double> signal,
                  std::span<std::complex<double>> out) {
    for (std::size_t i = 0; i < n_; ++i) buffer_[i] = window_[i] * signal[SampleIndex(f, i)];
    RealFft(buffer_, spectrum_);
    for (std::size_t i = 0; i < f.bins.size(); ++i) out[i] = spectrum_[f.bins[i]];
  }

  void AddAdjointFrame(const Frame& f, std::span<const std::complex<double>> coeffs,
                       std::vector<double>& out) {
    std::fill(spectrum_.begin(), spectrum_.end(), std::complex<double>());
    for (std::size_t i = 0; i < f.bins.size(); ++i) spectrum_[f.bins[i]] = coeffs[i];
    InverseRealFft(spectrum_, buffer_);
    const double scale = static_cast<double>(n_) / 2.0;
    for (std::size_t i = 0; i < n_; ++i) {
      out[SampleIndex(f, i)] += scale * window_[i] * buffer_[i];
    }
  }

  // The diagonal block of an interior frame is the Toeplitz matrix of the
  // squared window's spectrum restricted to runs of adjacent hole bins.
  void SolveDiagonal(const Frame& f, std::span<std::complex<double>> x) {
    std::size_t begin = 0;
    while (begin < f.bins.size()) {
      std::size_t end = begin + 1;
      while (end < f.bins.size() && f.bins[end] == f.bins[end - 1] + 1) ++end;
      const auto len = static_cast<Eigen::Index>(end - begin);
      const Eigen::LLT<Eigen::MatrixXd>& llt = Block(len);
      Eigen::MatrixXd rhs(len, 2);
      for (Eigen::Index i = 0; i < len; ++i) {
        rhs(i, 0) = x[begin + static_cast<std::size_t>(i)].real();
        rhs(i, 1) = x[begin + static_cast<std::size_t>(i)].imag();
      }
      const Eigen::MatrixXd sol = llt.solve(rhs);
      for (Eigen::Index i = 0; i < len; ++i) {
        x[begin + static_cast<std::size_t>(i)] = {sol(i, 0), sol(i, 1)};
      }
      begin = end;
    }
  }

  const Eigen::LLT<Eigen::MatrixXd>& Block(Eigen::Index len) {
    auto it = blocks_.find(len);
    if (it != blocks_.end()) return it->second;
    std::array<double, 3> kernel{};
    for (std::size_t m = 0; m < kernel.size(); ++m) {
      for (std::size_t i = 0; i < n_; ++i) {
        kernel[m] += window_[i] * window_[i] *
                     std::cos(2.0 * std::numbers::pi * static_cast<double>(m * i) /
                              static_cast<double>(n_));
      }
    }
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(len, len);
    for (Eigen::Index i = 0; i < len; ++i) {
      for (Eigen::Index j = 0; j < len; ++j) {
        const auto m = static_cast<std::size_t>(std::abs(i - j));
        if (m < kernel.size()) block(i, j) = 0.5 * kernel[m];
      }
    }
    return blocks_.emplace(len, Eigen::LLT<Eigen::MatrixXd>(block)).first->second;
  }

  std::size_t n_;
  std::size_t hop_;
  std::size_t length_;
  std::vector<double> window_;
  std::vector<std::complex<double>> spectrum_;
  std::vector<double> buffer_;
  std::vector<Frame> frames_;
  std::size_t offset_ = 0;
  std::map<Eigen::Index, Eigen::LLT<Eigen::MatrixXd>> blocks_;
};

}  // namespace

std::vector<bool> AppliedHolePattern(std::size_t num_samples, int sample_rate_hz,
                                     double density, int width, std::uint64_t seed,
                                     const SpectralHoleOptions& options) {
  ValidateStftParams(options.stft);
  const HoleBands bands = MakeHoleBands(options.stft, sample_rate_hz, options);
  const std::size_t n = options.stft.window_length;
  const std::size_t hop = options.stft.hop;
  const std::size_t frames =
      (n + num_samples <= n) ? 1 : (num_samples + hop - 1) / hop + 1;
  std::vector<bool> pattern = DrawHolePattern(frames, bands.num_bands, density,
                                              width, seed, options.persistent);
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t start = t * hop;
    if (start >= n / 2 && start + n <= n / 2 + num_samples) continue;
    for (std::size_t b = 0; b < bands.num_bands; ++b) {
      pattern[t * bands.num_bands + b] = false;
    }
  }
  return pattern;
}

std::vector<double> ApplySpectralHoles(std::span<const double> channel,
                                       int sample_rate_hz, double hole_density,
                                       int hole_width_bands, std::uint64_t seed,
                                       const SpectralHoleOptions& options) {
  if (hole_density < 0.0 || hole_density > 1.0) {
    throw ConfigError("hole density must be in [0, 1]");
  }
  if (channel.empty()) return {};
  const HoleBands bands = MakeHoleBands(options.stft, sample_rate_hz, options);
  const std::vector<bool> pattern =
      AppliedHolePattern(channel.size(), sample_rate_hz, hole_density,
                         hole_width_bands, seed, options);
  if (std::find(pattern.begin(), pattern.end(), true) == pattern.end()) {
    return Istft(Stft(channel, sample_rate_hz, options.stft));
  }

  // Minimum-norm correction: y = x - A^T l with (A A^T) l = A x, solved by
  // preconditioned conjugate gradients.
  HoleSystem system(options.stft, channel.size(), bands, pattern);
  Coefficients residual = system.Apply(channel);
  Coefficients lambda(residual.size());
  Coefficients precond = system.Precondition(residual);
  Coefficients direction = precond;
  const double initial = RealDot(residual, residual);
  double rz = RealDot(residual, precond);
  for (int iter = 0; iter < options.solver_iterations; ++iter) {
    if (RealDot(residual, residual) <=
        initial * options.solver_tolerance * options.solver_tolerance) {
      break;
    }
    const Coefficients md = system.Apply(system.Adjoint(direction));
    const double curvature = RealDot(direction, md);
    if (!(curvature > 0.0)) break;
    const double alpha = rz / curvature;
    for (std::size_t i = 0; i < residual.size(); ++i) {
      lambda[i] += alpha * direction[i];
      residual[i] -= alpha * md[i];
    }
    precond = system.Precondition(residual);
    const double next = RealDot(residual, precond);
    const double beta = next / rz;
    rz = next;
    for (std::size_t i = 0; i < direction.size(); ++i) {
      direction[i] = precond[i] + beta * direction[i];
    }
  }
  std::vector<double> out(channel.begin(), channel.end());
  const std::vector<double> correction = system.Adjoint(lambda);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= correction[i];
  return out;
}

namespace {

std::vector<double> ApplyArtifact(std::span<const double> channel, int rate,
                                  const TreatmentSpec& spec, std::uint64_t seed,
                                  const DegradeOptions& options) {
  const QualityLevelParams& row = options.table.at(spec.level);
  if (spec.artifact == Artifact::kQuantizationNoise) {
    return ApplyQuantizationNoise(channel, rate, row.qn_target_nmr_db, seed,
                                  options.qn);
  }
  return ApplySpectralHoles(channel, rate, row.sh_hole_density,
                            row.sh_hole_width_bands, seed, options.sh);
}

}  // namespace

AudioBuffer ApplyTreatment(const AudioBuffer& buffer, const TreatmentSpec& spec,
                           const DegradeOptions& options) {
  RequireStereo(buffer, "treatment");
  const bool mid_side = spec.mode == StereoMode::kMidSide;
  const AudioBuffer input = mid_side ? ToMidSide(buffer) : buffer;
  const std::uint64_t second_seed =
      spec.share_channel_seed ? spec.seed : spec.seed ^ 1u;
  std::vector<std::vector<double>> channels;
  channels.push_back(ApplyArtifact(input.channel(0), input.sample_rate_hz(),
                                   spec, spec.seed, options));
  channels.push_back(ApplyArtifact(input.channel(1), input.sample_rate_hz(),
                                   spec, second_seed, options));
  AudioBuffer processed(input.sample_rate_hz(), std::move(channels),
                        input.full_scale_spl_db());
  return mid_side ? FromMidSide(processed) : processed;
}

std::string_view ExperimentName(Experiment experiment) {
  switch (experiment) {
    case Experiment::kQNLR:
      return "QNLR";
    case Experiment::kQNMS:
      return "QNMS";
    case Experiment::kSHLR:
      return "SHLR";
    case Experiment::kSHMS:
      return "SHMS";
    case Experiment::kQNmix:
      return "QNmix";
    case Experiment::kSHmix:
      return "SHmix";
  }
  return "QNLR";
}

const std::array<Experiment, 6>& AllExperiments() {
  static const std::array<Experiment, 6> all{
      Experiment::kQNLR, Experiment::kQNMS,  Experiment::kSHLR,
      Experiment::kSHMS, Experiment::kQNmix, Experiment::kSHmix};
  return all;
}

Experiment ParseExperiment(std::string_view label) {
  for (Experiment e : AllExperiments()) {
    if (label == ExperimentName(e)) return e;
  }
  throw ConfigError("unknown experiment '" + std::string(label) + "'");
}

bool IsMixExperiment(Experiment experiment) {
  return experiment == Experiment::kQNmix || experiment == Experiment::kSHmix;
}

std::uint64_t TreatmentSeed(std::uint64_t base_seed, Artifact artifact,
                            StereoMode mode, QualityLevel level) {
  TreatmentSpec spec{artifact, mode, level, 0, false};
  return DeriveSeed(base_seed, spec.ConditionLabel());
}

std::vector<Condition> BuildConditionSet(const AudioBuffer& reference,
                                         Experiment experiment,
                                         const ConditionSetOptions& options) {
  ConditionCache cache;
  return BuildConditionSet(reference, experiment, options, cache);
}

std::vector<Condition> BuildConditionSet(const AudioBuffer& reference,
                                         Experiment experiment,
                                         const ConditionSetOptions& options,
                                         ConditionCache& cache) {
  RequireStereo(reference, "condition set");
  const Artifact artifact =
      (experiment == Experiment::kQNLR || experiment == Experiment::kQNMS ||
       experiment == Experiment::kQNmix)
          ? Artifact::kQuantizationNoise
          : Artifact::kSpectralHoles;

  std::vector<std::pair<StereoMode, QualityLevel>> treatments;
  if (IsMixExperiment(experiment)) {
    for (StereoMode mode : {StereoMode::kLeftRight, StereoMode::kMidSide}) {
      for (QualityLevel level : options.mix_levels) treatments.emplace_back(mode, level);
    }
  } else {
    const StereoMode mode =
        (experiment == Experiment::kQNLR || experiment == Experiment::kSHLR)
            ? StereoMode::kLeftRight
            : StereoMode::kMidSide;
    for (int q = 1; q <= 5; ++q) {
      treatments.emplace_back(mode, static_cast<QualityLevel>(q));
    }
  }

  auto cached = [&cache](const std::string& label, auto&& make) -> const AudioBuffer& {
    auto it = cache.find(label);
    if (it == cache.end()) it = cache.emplace(label, make()).first;
    return it->second;
  };
  std::vector<Condition> conditions;
  for (const auto& [mode, level] : treatments) {
    TreatmentSpec spec{artifact, mode, level,
                       TreatmentSeed(options.base_seed, artifact, mode, level), false};
    const std::string label = spec.ConditionLabel();
    conditions.push_back(Condition{label, spec, cached(label, [&] {
                                     return ApplyTreatment(reference, spec, options.degrade);
                                   })});
  }
  conditions.push_back(Condition{std::string(kLowpass3500), std::nullopt,
                                 cached(std::string(kLowpass3500), [&] {
                                   return LowpassAnchor(reference, 3500.0);
                                 })});
  conditions.push_back(Condition{std::string(kLowpass7000), std::nullopt,
                                 cached(std::string(kLowpass7000), [&] {
                                   return LowpassAnchor(reference, 7000.0);
                                 })});
  if (IsMixExperiment(experiment)) {
    conditions.push_back(Condition{std::string(kMonoAnchor), std::nullopt,
                                   cached(std::string(kMonoAnchor),
                                          [&] { return MonoAnchor(reference); })});
  }
  conditions.push_back(Condition{std::string(kHiddenReference), std::nullopt, reference});
  return conditions;
}

std::string ConditionFileName(std::string_view item, const Condition& condition) {
  std::string name(item);
  name += "__";
  if (condition.treatment) {
    const TreatmentSpec& t = *condition.treatment;
    name += std::string(ArtifactCode(t.artifact)) + std::string(StereoModeCode(t.mode)) +
            "__" + QualityLevelCode(t.level);
  } else {
    name += condition.label;
  }
  return name + ".wav";
}

}  // namespace stereoqa
