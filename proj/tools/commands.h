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

#ifndef STEREOQA_TOOLS_COMMANDS_H_
#define STEREOQA_TOOLS_COMMANDS_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "config.h"

namespace stereoqa::tools {

struct CommandSummary {
  std::size_t outputs = 0;  // files or rows written
  std::vector<std::string> errors;  // non-fatal, per item or pair
};

// Writes <out>/<experiment>/<item>__*.wav with a .json sidecar each and
// <out>/index.csv. Items whose reference cannot be read are reported and
// skipped.
CommandSummary RunDegrade(const RunConfig& config);

inline constexpr const char* kObjectiveMetrics[] = {
    "binaural_quality", "d_iacc",       "d_ild_db",
    "d_itd_us",         "mobiq_min_rule", "nmr_db",
    "timbre_average",   "timbre_concatenate", "timbre_ild_normalize"};

// Reads an index written by RunDegrade and writes one row per pair and
// metric to `objective_csv`, sorted by item, experiment, condition, metric.
// A pair that fails gets a single row with metric "error" and value nan.
CommandSummary RunAssess(const RunConfig& config,
                         const std::filesystem::path& index_csv,
                         const std::filesystem::path& objective_csv);

// Writes <out>/report.csv and <out>/report.json. Throws ValidationError when
// no objective value joins a subjective score.
CommandSummary RunEvaluate(const RunConfig& config,
                           const std::filesystem::path& objective_csv,
                           const std::filesystem::path& scores_csv);

// Fits a hinge model to a training CSV and saves it.
CommandSummary RunFitRegression(const std::filesystem::path& training_csv,
                                const std::filesystem::path& model_path,
                                std::size_t max_terms, int max_degree);

// Writes the binaural cue track of a stereo file.
CommandSummary RunExportCues(const RunConfig& config,
                             const std::filesystem::path& wav,
                             const std::filesystem::path& csv);

}  // namespace stereoqa::tools

#endif  // STEREOQA_TOOLS_COMMANDS_H_
