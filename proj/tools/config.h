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

#ifndef STEREOQA_TOOLS_CONFIG_H_
#define STEREOQA_TOOLS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stereoqa/binaural.h"
#include "stereoqa/degrade.h"
#include "stereoqa/evalharness.h"
#include "stereoqa/fusion.h"
#include "stereoqa/timbre.h"
#include "stereoqa/wav.h"

namespace stereoqa::tools {

// Presentation levels each metric assumes, dB SPL.
struct CalibrationConfig {
  double full_scale_spl_db = 100.0;
  double nmr_spl_db = 92.0;
  double timbre_spl_db = 65.0;
  double binaural_spl_db = 65.0;
};

struct RunConfig {
  // Relative paths in the file are resolved against the config's directory.
  std::filesystem::path items_manifest;
  std::filesystem::path output_dir = "out";
  std::filesystem::path subjective_scores;
  std::uint64_t seed = 0;
  std::vector<Experiment> experiments{Experiment::kQNLR, Experiment::kQNMS,
                                      Experiment::kSHLR, Experiment::kSHMS};
  std::vector<Grouping> groupings{Grouping::kPerExperiment, Grouping::kPerItem,
                                  Grouping::kHardpanSplit};
  WavSampleFormat wav_format = WavSampleFormat::kPcm24;

  CalibrationConfig calibration;
  ConditionSetOptions conditions;
  StftParams stft;
  TimbreParams timbre;
  CueParams cues;
  BinauralWeights binaural_weights;
  MinRuleScales min_rule;
  ReportOptions report;
};

// Reads a JSON object of flat keys (see DefaultConfigJson for every key and
// its default). Unknown keys and wrongly typed values raise ConfigError.
RunConfig LoadConfig(const std::filesystem::path& path);
RunConfig ParseConfig(const std::string& json_text,
                      const std::filesystem::path& base_dir);

// The default configuration as a JSON document.
std::string DefaultConfigJson();

struct ManifestEntry {
  std::string item;
  std::filesystem::path path;
  bool hard_panned = false;
  std::string description;
};

// CSV `item,path,hard_panned,description`; paths relative to the manifest.
// Throws ConfigError on duplicate labels.
std::vector<ManifestEntry> LoadManifest(const std::filesystem::path& path);
std::vector<ItemMetadata> ToItemMetadata(const std::vector<ManifestEntry>& entries);

// Comma-separated experiment / grouping lists for command-line flags.
std::vector<Experiment> ParseExperimentList(const std::string& text);
std::vector<Grouping> ParseGroupingList(const std::string& text);

}  // namespace stereoqa::tools

#endif  // STEREOQA_TOOLS_CONFIG_H_
