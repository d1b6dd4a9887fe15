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

#include "fixtures.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "stereoqa/csv.h"
#include "stereoqa/error.h"
#include "stereoqa/rng.h"
#include "stereoqa/wav.h"

namespace stereoqa::tools {
namespace fs = std::filesystem;
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// One-pole smoothed noise: a cheap pink-ish bed.
std::vector<double> NoiseBed(std::size_t n, double level, Rng& rng) {
  std::vector<double> out(n);
  double state = 0.0;
  for (double& v : out) {
    state = 0.97 * state + 0.03 * rng.Gaussian();
    v = level * (state * 4.0 + 0.2 * rng.Gaussian());
  }
  return out;
}

double Fade(std::size_t i, std::size_t n, double rate) {
  const double t = static_cast<double>(i) / rate;
  const double end = static_cast<double>(n - i) / rate;
  return std::min({1.0, t / 0.02, end / 0.02});
}

}  // namespace

AudioBuffer SyntheticViolin(double seconds, int sample_rate_hz, std::uint64_t seed) {
  const double rate = sample_rate_hz;
  const auto n = static_cast<std::size_t>(seconds * rate);
  Rng rng(seed);
  const double notes[] = {440.0, 493.88, 554.37, 587.33, 659.25};
  const double note_s = 0.6;
  std::vector<double> tone(n, 0.0);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i / rate;
    const auto note = static_cast<std::size_t>(t / note_s);
    const double local = t - note * note_s;
    const double f0 = notes[note % 5] * (1.0 + 0.006 * std::sin(kTwoPi * 5.5 * t));
    phase += kTwoPi * f0 / rate;
    const double env = std::min(1.0, local / 0.05) * (0.7 + 0.3 * std::exp(-local * 3.0));
    double s = 0.0;
    for (int k = 1; k <= 24 && k * f0 < 0.45 * rate; ++k) {
      s += std::sin(k * phase + 0.3 * k) / k;
    }
    tone[i] = 0.18 * env * s * Fade(i, n, rate);
  }
  const auto delay = static_cast<std::size_t>(0.0003 * rate);
  const std::vector<double> room_l = NoiseBed(n, 0.002, rng);
  const std::vector<double> room_r = NoiseBed(n, 0.002, rng);
  std::vector<double> left(n), right(n);
  for (std::size_t i = 0; i < n; ++i) {
    left[i] = tone[i] + room_l[i];
    right[i] = 0.9 * (i >= delay ? tone[i - delay] : 0.0) + room_r[i];
  }
  return AudioBuffer(sample_rate_hz, {std::move(left), std::move(right)});
}

AudioBuffer SyntheticPannedDialog(double seconds, int sample_rate_hz, std::uint64_t seed) {
  const double rate = sample_rate_hz;
  const auto n = static_cast<std::size_t>(seconds * rate);
  Rng rng(seed);
  // Formant triples (Hz) of a few vowels.
  const double formants[][3] = {
      {850, 1610, 2850}, {390, 2300, 3000}, {600, 1200, 2600}, {300, 870, 2250}};
  const double syllable_s = 0.22;
  std::vector<double> voice(n, 0.0);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i / rate;
    const auto syllable = static_cast<std::size_t>(t / syllable_s);
    const double local = (t - syllable * syllable_s) / syllable_s;
    const bool pause = syllable % 6 == 5;
    const double f0 = 210.0 + 25.0 * std::sin(kTwoPi * 0.7 * t) - 20.0 * local;
    phase += kTwoPi * f0 / rate;
    const double* f = formants[syllable % 4];
    double s = 0.0;
    for (int k = 1; k * f0 < 5000.0; ++k) {
      const double h = k * f0;
      double gain = 0.0;
      for (int j = 0; j < 3; ++j) {
        const double bw = 80.0 + 40.0 * j;
        gain += 1.0 / (1.0 + std::pow((h - f[j]) / bw, 2.0)) / (j + 1);
      }
      s += gain * std::sin(k * phase);
    }
    const double env = pause ? 0.0 : std::pow(std::sin(std::numbers::pi * local), 0.6);
    voice[i] = 0.12 * env * s * Fade(i, n, rate);
  }
  std::vector<double> left = NoiseBed(n, 0.003, rng);
  std::vector<double> right = NoiseBed(n, 0.003, rng);
  for (std::size_t i = 0; i < n; ++i) left[i] += voice[i];
  return AudioBuffer(sample_rate_hz, {std::move(left), std::move(right)});
}

std::vector<std::string> TrialConditions(Experiment experiment,
                                         const ConditionSetOptions& options) {
  std::vector<std::string> labels;
  const Artifact artifact =
      (experiment == Experiment::kSHLR || experiment == Experiment::kSHMS ||
       experiment == Experiment::kSHmix)
          ? Artifact::kSpectralHoles
          : Artifact::kQuantizationNoise;
  if (IsMixExperiment(experiment)) {
    for (StereoMode mode : {StereoMode::kLeftRight, StereoMode::kMidSide}) {
      for (QualityLevel level : options.mix_levels) {
        labels.push_back(TreatmentSpec{artifact, mode, level}.ConditionLabel());
      }
    }
  } else {
    const StereoMode mode =
        (experiment == Experiment::kQNMS || experiment == Experiment::kSHMS)
            ? StereoMode::kMidSide
            : StereoMode::kLeftRight;
    for (int q = 1; q <= 5; ++q) {
      labels.push_back(
          TreatmentSpec{artifact, mode, static_cast<QualityLevel>(q)}.ConditionLabel());
    }
  }
  labels.emplace_back(kLowpass3500);
  labels.emplace_back(kLowpass7000);
  if (IsMixExperiment(experiment)) labels.emplace_back(kMonoAnchor);
  labels.emplace_back(kHiddenReference);
  return labels;
}

namespace {

// Synthetic listener scores: a level-driven mean, lower for Mid/Side
// treatments of the hard-panned item, plus listener bias and noise.
double MeanScore(const std::string& condition, bool hard_panned) {
  if (condition == kHiddenReference) return 96.0;
  if (condition == kLowpass3500) return 18.0;
  if (condition == kLowpass7000) return 38.0;
  if (condition == kMonoAnchor) return hard_panned ? 28.0 : 62.0;
  const int level = condition.back() - '0';
  double mean = 12.0 + 15.0 * level;
  if (hard_panned && condition.compare(2, 2, "MS") == 0) mean -= 12.0;
  if (condition.compare(0, 2, "SH") == 0) mean -= 4.0;
  return mean;
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

}  // namespace

void WriteFixtureSet(const fs::path& dir, std::uint64_t seed) {
  fs::create_directories(dir);
  constexpr int kRate = 48000;
  constexpr double kSeconds = 3.0;
  SaveWav(SyntheticViolin(kSeconds, kRate, DeriveSeed(seed, "Violin")), dir / "Violin.wav");
  SaveWav(SyntheticPannedDialog(kSeconds, kRate, DeriveSeed(seed, "panDialogF")),
          dir / "panDialogF.wav");

  {
    std::ofstream items(dir / "items.csv", std::ios::binary);
    WriteCsvRow(items, {"item", "path", "hard_panned", "description"});
    WriteCsvRow(items, {"Violin", "Violin.wav", "false", "Solo violin, centred"});
    WriteCsvRow(items, {"panDialogF", "panDialogF.wav", "true",
                        "Female dialog hard panned left over ambience"});
  }

  {
    std::ofstream scores(dir / "scores.csv", std::ios::binary);
    WriteCsvRow(scores, {"item", "experiment", "condition", "listener_id", "score"});
    Rng rng(DeriveSeed(seed, "scores"));
    std::vector<double> bias(16);
    for (double& b : bias) b = 3.0 * rng.Gaussian();
    for (const auto& [item, hard_panned] :
         {std::pair<std::string, bool>{"Violin", false}, {"panDialogF", true}}) {
      for (Experiment experiment : AllExperiments()) {
        for (const std::string& condition : TrialConditions(experiment)) {
          for (std::size_t l = 0; l < bias.size(); ++l) {
            const double raw = MeanScore(condition, hard_panned) + bias[l] + 6.0 * rng.Gaussian();
            const double score = std::round(std::clamp(raw, 0.0, 100.0));
            WriteCsvRow(scores, {item, std::string(ExperimentName(experiment)), condition,
                                 "L" + std::string(l < 9 ? "0" : "") + std::to_string(l + 1),
                                 FormatDouble(score)});
          }
        }
      }
    }
  }

  nlohmann::ordered_json config;
  config["items_manifest"] = "items.csv";
  config["output_dir"] = "out";
  config["subjective_scores"] = "scores.csv";
  config["seed"] = seed;
  std::vector<std::string> experiments;
  for (Experiment e : AllExperiments()) experiments.emplace_back(ExperimentName(e));
  config["experiments"] = experiments;
  config["groupings"] = {"per_experiment", "per_item", "hardpan_split"};
  config["sh.solver_iterations"] = 60;
  WriteFile(dir / "config.json", config.dump(2) + "\n");
}

}  // namespace stereoqa::tools
