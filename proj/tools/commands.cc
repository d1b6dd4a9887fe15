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

#include "commands.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <utility>
#include <tuple>

#include <nlohmann/json.hpp>

#include "stereoqa/binaural.h"
#include "stereoqa/csv.h"
#include "stereoqa/error.h"
#include "stereoqa/fusion.h"
#include "stereoqa/log.h"
#include "stereoqa/nmr.h"
#include "stereoqa/timbre.h"
#include "stereoqa/wav.h"

namespace stereoqa::tools {
namespace fs = std::filesystem;
namespace {

std::string Relative(const fs::path& path, const fs::path& base) {
  return fs::proximate(path, base).generic_string();
}

void WriteTextFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

nlohmann::ordered_json Sidecar(const std::string& item, Experiment experiment,
                               const Condition& condition, const AudioBuffer& audio,
                               const RunConfig& config, const std::string& reference,
                               std::size_t clipped) {
  nlohmann::ordered_json j;
  j["item"] = item;
  j["experiment"] = ExperimentName(experiment);
  j["condition"] = condition.label;
  j["reference"] = reference;
  j["sample_rate_hz"] = audio.sample_rate_hz();
  j["num_samples"] = audio.num_samples();
  j["clipped_samples"] = clipped;
  if (condition.treatment) {
    const TreatmentSpec& t = *condition.treatment;
    const QualityLevelParams& row = config.conditions.degrade.table.at(t.level);
    nlohmann::ordered_json p;
    p["artifact"] = ArtifactCode(t.artifact);
    p["mode"] = StereoModeCode(t.mode);
    p["level"] = QualityLevelCode(t.level);
    p["seed"] = t.seed;
    p["second_channel_seed"] = t.share_channel_seed ? t.seed : (t.seed ^ 1u);
    if (t.artifact == Artifact::kQuantizationNoise) {
      p["target_nmr_db"] = row.qn_target_nmr_db;
      p["refinement_passes"] = config.conditions.degrade.qn.refinement_passes;
      p["full_scale_spl_db"] = config.conditions.degrade.qn.model.full_scale_spl_db;
    } else {
      const SpectralHoleOptions& sh = config.conditions.degrade.sh;
      p["hole_density"] = row.sh_hole_density;
      p["hole_width_bands"] = row.sh_hole_width_bands;
      p["bins_per_band"] = sh.bins_per_band;
      p["low_hz"] = sh.low_hz;
      p["high_hz"] = sh.high_hz;
      p["persistent"] = sh.persistent;
      p["solver_iterations"] = sh.solver_iterations;
      p["solver_tolerance"] = sh.solver_tolerance;
    }
    p["window_length"] = config.stft.window_length;
    p["hop"] = config.stft.hop;
    j["treatment"] = p;
  } else {
    j["treatment"] = nullptr;
  }
  return j;
}

}  // namespace

CommandSummary RunDegrade(const RunConfig& config) {
  if (config.items_manifest.empty()) throw ConfigError("items_manifest is not set");
  const std::vector<ManifestEntry> manifest = LoadManifest(config.items_manifest);
  const fs::path& out = config.output_dir;
  fs::create_directories(out);

  CommandSummary summary;
  std::vector<std::vector<std::string>> index;
  for (const ManifestEntry& entry : manifest) {
    std::optional<AudioBuffer> loaded;
    try {
      loaded = LoadWav(entry.path, config.calibration.full_scale_spl_db);
      RequireStereo(*loaded, "degrade");
    } catch (const Error& e) {
      summary.errors.push_back(entry.item + ": " + e.what());
      continue;
    }
    const AudioBuffer& reference = *loaded;
    const std::string reference_rel = Relative(entry.path, out);
    ConditionCache cache;
    for (Experiment experiment : config.experiments) {
      const fs::path dir = out / std::string(ExperimentName(experiment));
      fs::create_directories(dir);
      for (const Condition& condition :
           BuildConditionSet(reference, experiment, config.conditions, cache)) {
        const std::string name = ConditionFileName(entry.item, condition);
        const fs::path wav = dir / name;
        const fs::path sidecar = fs::path(wav).replace_extension(".json");
        const WavWriteResult written = SaveWav(condition.audio, wav, config.wav_format);
        WriteTextFile(sidecar, Sidecar(entry.item, experiment, condition, condition.audio,
                                       config, reference_rel, written.clipped_samples)
                                       .dump(2) + "\n");
        index.push_back({entry.item, std::string(ExperimentName(experiment)),
                         condition.label, Relative(wav, out), Relative(sidecar, out),
                         reference_rel});
        ++summary.outputs;
      }
    }
  }

  std::ofstream csv(out / "index.csv", std::ios::binary);
  if (!csv) throw IoError("cannot write " + (out / "index.csv").string());
  WriteCsvRow(csv, {"item", "experiment", "condition", "path", "sidecar", "reference"});
  for (const auto& row : index) WriteCsvRow(csv, row);
  return summary;
}

namespace {

struct PairMetrics {
  std::vector<std::pair<std::string, double>> values;
};

struct ReferenceCache {
  AudioBuffer nmr_audio;
  AudioBuffer timbre_audio;
  BinauralCueTrack cues;
};

double Gain(double target, const RunConfig& config) {
  return CalibrationGain({target, config.calibration.full_scale_spl_db});
}

MaskingModel NmrModel(const RunConfig& config) {
  MaskingModel model = config.conditions.degrade.qn.model;
  model.full_scale_spl_db = config.calibration.full_scale_spl_db;
  return model;
}

PairMetrics Assess(const ReferenceCache& ref, const AudioBuffer& test, const RunConfig& config) {
  RequireAligned(ref.nmr_audio, test);
  PairMetrics m;
  const AudioBuffer nmr_test = test.Scaled(Gain(config.calibration.nmr_spl_db, config));
  const NmrScore nmr = ComputeNmr(ref.nmr_audio, nmr_test, NmrModel(config));
  m.values.emplace_back("nmr_db", nmr.mean_nmr_db);

  const AudioBuffer timbre_test = test.Scaled(Gain(config.calibration.timbre_spl_db, config));
  double concatenated = 0.0;
  for (ChannelMode mode :
       {ChannelMode::kAverage, ChannelMode::kConcatenate, ChannelMode::kIldNormalize}) {
    const double s =
        ModulationTimbreScore(ref.timbre_audio, timbre_test, mode, config.timbre).similarity;
    if (mode == ChannelMode::kConcatenate) concatenated = s;
    m.values.emplace_back("timbre_" + std::string(ChannelModeName(mode)), s);
  }

  const AudioBuffer bin_test = test.Scaled(Gain(config.calibration.binaural_spl_db, config));
  const CueDistortion d = ComputeCueDistortion(ref.cues, ExtractCues(bin_test, config.cues));
  const double bin_q = BinauralQuality(d, config.binaural_weights);
  m.values.emplace_back("d_ild_db", d.d_ild_db);
  m.values.emplace_back("d_itd_us", d.d_itd_us);
  m.values.emplace_back("d_iacc", d.d_iacc);
  m.values.emplace_back("binaural_quality", bin_q);

  const MinRuleScales& scales = config.min_rule;
  const double opm_dual = std::max(concatenated, 1e-6) / scales.monaural;
  const double fused = MinRule(opm_dual, bin_q / scales.binaural, scales).value;
  m.values.emplace_back("mobiq_min_rule", fused);
  return m;
}

std::string FileDigest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream bytes;
  bytes << in.rdbuf();
  const std::string data = bytes.str();
  return std::to_string(data.size()) + ":" + std::to_string(std::hash<std::string>{}(data));
}

}  // namespace

CommandSummary RunAssess(const RunConfig& config, const fs::path& index_csv,
                         const fs::path& objective_csv) {
  const CsvTable index = ReadCsvFile(index_csv);
  std::vector<std::size_t> cols;
  for (const char* name : {"item", "experiment", "condition", "path", "reference"}) {
    const auto c = index.column(name);
    if (!c) throw ValidationError(index_csv.string() + ": missing column '" + name + "'");
    cols.push_back(*c);
  }
  const fs::path base = index_csv.parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
  };

  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  std::map<Key, double> rows;
  std::map<std::string, ReferenceCache> references;
  std::map<std::pair<std::string, std::string>, PairMetrics> assessed;
  CommandSummary summary;
  for (const auto& row : index.rows) {
    const std::string& item = row[cols[0]];
    const std::string& experiment = row[cols[1]];
    const std::string& condition = row[cols[2]];
    try {
      const std::string& ref_path = row[cols[4]];
      auto it = references.find(ref_path);
      if (it == references.end()) {
        const AudioBuffer ref =
            LoadWav(resolve(ref_path), config.calibration.full_scale_spl_db);
        RequireStereo(ref, "assess");
        ReferenceCache cache{
            ref.Scaled(Gain(config.calibration.nmr_spl_db, config)),
            ref.Scaled(Gain(config.calibration.timbre_spl_db, config)),
            ExtractCues(ref.Scaled(Gain(config.calibration.binaural_spl_db, config)),
                        config.cues)};
        it = references.emplace(ref_path, std::move(cache)).first;
      }
      const fs::path test_path = resolve(row[cols[3]]);
      // The same condition file often appears in several trials.
      const auto key = std::make_pair(ref_path, FileDigest(test_path));
      auto done = assessed.find(key);
      if (done == assessed.end()) {
        const AudioBuffer test = LoadWav(test_path, config.calibration.full_scale_spl_db);
        done = assessed.emplace(key, Assess(it->second, test, config)).first;
      }
      for (const auto& [metric, value] : done->second.values) {
        rows[{item, experiment, condition, metric}] = value;
      }
    } catch (const Error& e) {
      summary.errors.push_back(item + "/" + experiment + "/" + condition + ": " + e.what());
      rows[{item, experiment, condition, "error"}] =
          std::numeric_limits<double>::quiet_NaN();
    }
  }

  if (objective_csv.has_parent_path()) fs::create_directories(objective_csv.parent_path());
  std::ofstream out(objective_csv, std::ios::binary);
  if (!out) throw IoError("cannot write " + objective_csv.string());
  WriteCsvRow(out, {"item", "experiment", "condition", "metric", "value"});
  for (const auto& [key, value] : rows) {
    const auto& [item, experiment, condition, metric] = key;
    WriteCsvRow(out, {item, experiment, condition, metric, FormatDouble(value)});
  }
  summary.outputs = rows.size();
  return summary;
}

CommandSummary RunEvaluate(const RunConfig& config, const fs::path& objective_csv,
                           const fs::path& scores_csv) {
  const IngestResult scores = IngestScores(scores_csv);
  for (const std::string& w : scores.warnings) Warn(w);
  const std::vector<ObjectiveRecord> objective = IngestObjective(objective_csv);
  if (CountJoinedPoints(scores.records, objective, config.report.anchors) == 0) {
    throw ValidationError("no objective value joins a subjective score");
  }
  std::vector<ItemMetadata> items;
  if (!config.items_manifest.empty() && fs::exists(config.items_manifest)) {
    items = ToItemMetadata(LoadManifest(config.items_manifest));
  }

  std::vector<CorrelationReport> reports;
  for (Grouping grouping : config.groupings) {
    reports.push_back(GroupReport(scores.records, objective, grouping, items, config.report));
  }
  CommandSummary summary;
  for (const CorrelationReport& report : reports) {
    for (const std::string& w : report.warnings) Warn(w);
    summary.outputs += report.groups.size() + report.pooled.size();
  }
  fs::create_directories(config.output_dir);
  std::ofstream csv(config.output_dir / "report.csv", std::ios::binary);
  if (!csv) throw IoError("cannot write report.csv");
  WriteReportCsv(reports, csv);
  WriteTextFile(config.output_dir / "report.json", ReportJson(reports));
  return summary;
}

CommandSummary RunFitRegression(const fs::path& training_csv, const fs::path& model_path,
                                std::size_t max_terms, int max_degree) {
  const TrainingData data = LoadTrainingCsv(training_csv);
  RegressionOptions options;
  options.max_terms = max_terms;
  options.max_degree = max_degree;
  const HingeModel model = FitRegression(data.features, data.targets, options);
  SaveHingeModel(model, model_path);
  CommandSummary summary;
  summary.outputs = model.terms.size();
  return summary;
}

CommandSummary RunExportCues(const RunConfig& config, const fs::path& wav,
                             const fs::path& csv) {
  const AudioBuffer audio = LoadWav(wav, config.calibration.full_scale_spl_db);
  const BinauralCueTrack track = ExtractCues(
      audio.Scaled(Gain(config.calibration.binaural_spl_db, config)), config.cues);
  WriteCueTrackCsv(track, csv);
  CommandSummary summary;
  summary.outputs = track.num_frames() * track.num_bands();
  return summary;
}

}  // namespace stereoqa::tools
