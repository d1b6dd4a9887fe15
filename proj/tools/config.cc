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

#include "config.h"

#include <array>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stereoqa/csv.h"
#include "stereoqa/error.h"

namespace stereoqa::tools {
namespace {

using nlohmann::json;

double Number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

std::size_t Count(const json& v, const std::string& key) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError("config key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

bool Bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be true or false");
  return v.get<bool>();
}

std::string String(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> Strings(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError("config key '" + key + "' must be a list of strings");
  std::vector<std::string> out;
  for (const json& e : v) out.push_back(String(e, key));
  return out;
}

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

using Setter = std::function<void(RunConfig&, const json&, const std::string&)>;

std::map<std::string, Setter> Setters(const std::filesystem::path& base) {
  std::map<std::string, Setter> s;
  s["items_manifest"] = [base](RunConfig& c, const json& v, const std::string& k) {
    c.items_manifest = Resolve(base, String(v, k));
  };
  s["output_dir"] = [base](RunConfig& c, const json& v, const std::string& k) {
    c.output_dir = Resolve(base, String(v, k));
  };
  s["subjective_scores"] = [base](RunConfig& c, const json& v, const std::string& k) {
    c.subjective_scores = Resolve(base, String(v, k));
  };
  s["seed"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.seed = Count(v, k);
    c.conditions.base_seed = c.seed;
  };
  s["experiments"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.experiments.clear();
    for (const auto& e : Strings(v, k)) c.experiments.push_back(ParseExperiment(e));
  };
  s["groupings"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.groupings.clear();
    for (const auto& g : Strings(v, k)) c.groupings.push_back(ParseGrouping(g));
  };
  s["wav_format"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.wav_format = ParseWavSampleFormat(String(v, k));
  };
  s["calibration.full_scale_spl_db"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.calibration.full_scale_spl_db = Number(v, k);
  };
  s["calibration.nmr_spl_db"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.calibration.nmr_spl_db = Number(v, k);
  };
  s["calibration.timbre_spl_db"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.calibration.timbre_spl_db = Number(v, k);
  };
  s["calibration.binaural_spl_db"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.calibration.binaural_spl_db = Number(v, k);
  };
  s["mix_levels"] = [](RunConfig& c, const json& v, const std::string& k) {
    const auto levels = Strings(v, k);
    if (levels.size() != 2) throw ConfigError("mix_levels needs exactly two levels");
    c.conditions.mix_levels = {ParseQualityLevel(levels[0]), ParseQualityLevel(levels[1])};
  };
  s["stft.window_length"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.stft.window_length = Count(v, k);
  };
  s["stft.hop"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.stft.hop = Count(v, k);
  };
  s["qn.refinement_passes"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.conditions.degrade.qn.refinement_passes = static_cast<int>(Count(v, k));
  };
  s["sh.low_hz"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.conditions.degrade.sh.low_hz = Number(v, k);
  };
  s["sh.high_hz"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.conditions.degrade.sh.high_hz = Number(v, k);
  };
  s["sh.bins_per_band"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.conditions.degrade.sh.bins_per_band = Count(v, k);
  };
  s["sh.persistent"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.conditions.degrade.sh.persistent = Bool(v, k);
  };
  s["sh.solver_iterations"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.conditions.degrade.sh.solver_iterations = static_cast<int>(Count(v, k));
  };
  s["sh.solver_tolerance"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.conditions.degrade.sh.solver_tolerance = Number(v, k);
  };
  s["masking.lower_slope_db_per_bark"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.conditions.degrade.qn.model.lower_slope_db_per_bark = Number(v, k);
  };
  s["masking.upper_slope_db_per_bark"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.conditions.degrade.qn.model.upper_slope_db_per_bark = Number(v, k);
  };
  s["masking.offset_db"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.conditions.degrade.qn.model.offset_db = Number(v, k);
  };
  s["masking.silence_gate_db"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.conditions.degrade.qn.model.silence_gate_db = Number(v, k);
  };
  s["timbre.window_length"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.timbre.stft.window_length = Count(v, k);
  };
  s["timbre.hop"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.timbre.stft.hop = Count(v, k);
  };
  s["timbre.compression_exponent"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.timbre.compression_exponent = Number(v, k);
  };
  s["timbre.envelope_cutoff_hz"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.timbre.envelope_cutoff_hz = Number(v, k);
  };
  s["binaural.frame_ms"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.cues.frame_ms = Number(v, k);
  };
  s["binaural.overlap"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.cues.overlap = Number(v, k);
  };
  s["binaural.energy_gate_db"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.cues.energy_gate_db = Number(v, k);
  };
  s["binaural.band_count"] = [](RunConfig& c, const json& v, const std::string& k) {
    const double lo = c.cues.bands.edges_hz.front();
    const double hi = c.cues.bands.edges_hz.back();
    c.cues.bands = BandSpec::LogSpaced(lo, hi, Count(v, k));
  };
  s["binaural.weight_ild"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.binaural_weights.ild = Number(v, k);
  };
  s["binaural.weight_itd"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.binaural_weights.itd = Number(v, k);
  };
  s["binaural.weight_iacc"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.binaural_weights.iacc = Number(v, k);
  };
  s["fusion.monaural_scale"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.min_rule.monaural = Number(v, k);
  };
  s["fusion.binaural_scale"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.min_rule.binaural = Number(v, k);
  };
  s["evaluate.drop_mono_anchor"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.report.anchors.drop_mono_anchor = Bool(v, k);
  };
  s["evaluate.per_listener"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.report.per_listener = Bool(v, k);
  };
  s["evaluate.global_mapping"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.report.global_mapping = Bool(v, k);
  };
  s["evaluate.enforce_monotonic"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.report.mapping.enforce_monotonic = Bool(v, k);
  };
  s["evaluate.min_group_points"] = [](RunConfig& c, const json& v, const std::string& k) {
    c.report.min_group_points = Count(v, k);
  };
  return s;
}

// Quality table rows are set as "quality.Q<n>.<field>" and validated as a
// whole once every key has been read.
bool SetQualityKey(std::array<QualityLevelParams, 5>& rows, const std::string& key,
                   const json& v) {
  if (key.rfind("quality.Q", 0) != 0 || key.size() < 12 || key[10] != '.') return false;
  const int level = key[9] - '0';
  if (level < 1 || level > 5) return false;
  const std::string field = key.substr(11);
  QualityLevelParams& row = rows[static_cast<std::size_t>(level - 1)];
  if (field == "qn_target_nmr_db") {
    row.qn_target_nmr_db = Number(v, key);
  } else if (field == "sh_hole_density") {
    row.sh_hole_density = Number(v, key);
  } else if (field == "sh_hole_width_bands") {
    row.sh_hole_width_bands = static_cast<int>(Count(v, key));
  } else {
    return false;
  }
  return true;
}

}  // namespace

RunConfig ParseConfig(const std::string& json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig config;
  config.output_dir = base_dir / config.output_dir;
  std::array<QualityLevelParams, 5> rows;
  for (int q = 1; q <= 5; ++q) {
    rows[static_cast<std::size_t>(q - 1)] =
        config.conditions.degrade.table.at(static_cast<QualityLevel>(q));
  }
  const auto setters = Setters(base_dir);
  for (const auto& [key, value] : doc.items()) {
    if (SetQualityKey(rows, key, value)) continue;
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(config, value, key);
  }
  config.conditions.degrade.table = QualityLevelTable(rows);
  ValidateStftParams(config.stft);
  ValidateStftParams(config.timbre.stft);
  config.conditions.degrade.qn.model.stft = config.stft;
  config.conditions.degrade.qn.model.full_scale_spl_db = config.calibration.nmr_spl_db;
  config.conditions.degrade.sh.stft = config.stft;
  CalibrationGain({config.calibration.nmr_spl_db, config.calibration.full_scale_spl_db});
  CalibrationGain({config.calibration.timbre_spl_db, config.calibration.full_scale_spl_db});
  CalibrationGain({config.calibration.binaural_spl_db, config.calibration.full_scale_spl_db});
  BinauralQuality({}, config.binaural_weights);
  if (!(config.min_rule.monaural > 0.0) || !(config.min_rule.binaural > 0.0)) {
    throw ConfigError("fusion scales must be positive");
  }
  return config;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str(), path.parent_path());
}

std::string DefaultConfigJson() {
  const RunConfig c;
  const QualityLevelTable table;
  nlohmann::ordered_json doc;
  doc["items_manifest"] = "items.csv";
  doc["output_dir"] = "out";
  doc["subjective_scores"] = "scores.csv";
  doc["seed"] = c.seed;
  doc["experiments"] = {"QNLR", "QNMS", "SHLR", "SHMS"};
  doc["groupings"] = {"per_experiment", "per_item", "hardpan_split"};
  doc["wav_format"] = "24";
  doc["calibration.full_scale_spl_db"] = c.calibration.full_scale_spl_db;
  doc["calibration.nmr_spl_db"] = c.calibration.nmr_spl_db;
  doc["calibration.timbre_spl_db"] = c.calibration.timbre_spl_db;
  doc["calibration.binaural_spl_db"] = c.calibration.binaural_spl_db;
  for (int q = 1; q <= 5; ++q) {
    const auto& row = table.at(static_cast<QualityLevel>(q));
    const std::string prefix = "quality.Q" + std::to_string(q) + ".";
    doc[prefix + "qn_target_nmr_db"] = row.qn_target_nmr_db;
    doc[prefix + "sh_hole_density"] = row.sh_hole_density;
    doc[prefix + "sh_hole_width_bands"] = row.sh_hole_width_bands;
  }
  doc["mix_levels"] = {"Q2", "Q4"};
  doc["stft.window_length"] = c.stft.window_length;
  doc["stft.hop"] = c.stft.hop;
  doc["qn.refinement_passes"] = c.conditions.degrade.qn.refinement_passes;
  doc["sh.low_hz"] = c.conditions.degrade.sh.low_hz;
  doc["sh.high_hz"] = c.conditions.degrade.sh.high_hz;
  doc["sh.bins_per_band"] = c.conditions.degrade.sh.bins_per_band;
  doc["sh.persistent"] = c.conditions.degrade.sh.persistent;
  doc["sh.solver_iterations"] = c.conditions.degrade.sh.solver_iterations;
  doc["sh.solver_tolerance"] = c.conditions.degrade.sh.solver_tolerance;
  const MaskingModel model;
  doc["masking.lower_slope_db_per_bark"] = model.lower_slope_db_per_bark;
  doc["masking.upper_slope_db_per_bark"] = model.upper_slope_db_per_bark;
  doc["masking.offset_db"] = model.offset_db;
  doc["masking.silence_gate_db"] = model.silence_gate_db;
  doc["timbre.window_length"] = c.timbre.stft.window_length;
  doc["timbre.hop"] = c.timbre.stft.hop;
  doc["timbre.compression_exponent"] = c.timbre.compression_exponent;
  doc["timbre.envelope_cutoff_hz"] = c.timbre.envelope_cutoff_hz;
  doc["binaural.frame_ms"] = c.cues.frame_ms;
  doc["binaural.overlap"] = c.cues.overlap;
  doc["binaural.energy_gate_db"] = c.cues.energy_gate_db;
  doc["binaural.band_count"] = c.cues.bands.num_bands();
  doc["binaural.weight_ild"] = c.binaural_weights.ild;
  doc["binaural.weight_itd"] = c.binaural_weights.itd;
  doc["binaural.weight_iacc"] = c.binaural_weights.iacc;
  doc["fusion.monaural_scale"] = c.min_rule.monaural;
  doc["fusion.binaural_scale"] = c.min_rule.binaural;
  doc["evaluate.drop_mono_anchor"] = c.report.anchors.drop_mono_anchor;
  doc["evaluate.per_listener"] = c.report.per_listener;
  doc["evaluate.global_mapping"] = c.report.global_mapping;
  doc["evaluate.enforce_monotonic"] = c.report.mapping.enforce_monotonic;
  doc["evaluate.min_group_points"] = c.report.min_group_points;
  return doc.dump(2) + "\n";
}

std::vector<ManifestEntry> LoadManifest(const std::filesystem::path& path) {
  const CsvTable table = ReadCsvFile(path);
  const auto c_item = table.column("item");
  const auto c_path = table.column("path");
  if (!c_item || !c_path) throw ConfigError(path.string() + ": needs item and path columns");
  const auto c_pan = table.column("hard_panned");
  const auto c_desc = table.column("description");
  std::vector<ManifestEntry> entries;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    ManifestEntry e;
    e.item = row[*c_item];
    if (e.item.empty() || e.item.find("__") != std::string::npos) {
      throw ConfigError(path.string() + " line " + std::to_string(table.line_numbers[r]) +
                        ": item labels must be non-empty and must not contain '__'");
    }
    e.path = Resolve(path.parent_path(), row[*c_path]);
    if (c_pan) {
      const std::string& v = row[*c_pan];
      if (v == "true" || v == "1") {
        e.hard_panned = true;
      } else if (v == "false" || v == "0" || v.empty()) {
        e.hard_panned = false;
      } else {
        throw ConfigError(path.string() + ": hard_panned must be true or false");
      }
    }
    if (c_desc) e.description = row[*c_desc];
    for (const ManifestEntry& other : entries) {
      if (other.item == e.item) throw ConfigError("duplicate item label '" + e.item + "'");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ItemMetadata> ToItemMetadata(const std::vector<ManifestEntry>& entries) {
  std::vector<ItemMetadata> items;
  for (const ManifestEntry& e : entries) items.push_back({e.item, e.hard_panned, e.description});
  return items;
}

namespace {

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::vector<Experiment> ParseExperimentList(const std::string& text) {
  std::vector<Experiment> out;
  for (const auto& e : SplitList(text)) out.push_back(ParseExperiment(e));
  if (out.empty()) throw ConfigError("empty experiment list");
  return out;
}

std::vector<Grouping> ParseGroupingList(const std::string& text) {
  std::vector<Grouping> out;
  for (const auto& g : SplitList(text)) out.push_back(ParseGrouping(g));
  if (out.empty()) throw ConfigError("empty grouping list");
  return out;
}

}  // namespace stereoqa::tools
