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

#ifndef STEREOQA_TOOLS_FIXTURES_H_
#define STEREOQA_TOOLS_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stereoqa/audio_buffer.h"
#include "stereoqa/degrade.h"

namespace stereoqa::tools {

// Bowed-string tone with vibrato, centred with a slight inter-channel delay.
AudioBuffer SyntheticViolin(double seconds, int sample_rate_hz, std::uint64_t seed);

// Formant-filtered voiced syllables in the left channel only over a quiet,
// decorrelated stereo noise bed.
AudioBuffer SyntheticPannedDialog(double seconds, int sample_rate_hz, std::uint64_t seed);

// Condition labels presented in one trial of `experiment`.
std::vector<std::string> TrialConditions(Experiment experiment,
                                         const ConditionSetOptions& options = {});

// Writes Violin.wav, panDialogF.wav, items.csv, scores.csv (16 synthetic
// listeners over every experiment) and config.json into `dir`.
void WriteFixtureSet(const std::filesystem::path& dir, std::uint64_t seed);

}  // namespace stereoqa::tools

#endif  // STEREOQA_TOOLS_FIXTURES_H_
