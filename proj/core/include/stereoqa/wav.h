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

#ifndef STEREOQA_WAV_H_
#define STEREOQA_WAV_H_

#include <cstddef>
#include <filesystem>
#include <string>

#include "stereoqa/audio_buffer.h"

namespace stereoqa {

enum class WavSampleFormat { kPcm16, kPcm24, kFloat32 };

// Reads a RIFF/WAVE file with 16- or 24-bit integer PCM or 32-bit float
// samples (plain or WAVE_FORMAT_EXTENSIBLE). Integer samples are divided by
// 2^(bits-1). Unknown chunks are skipped.
//
// Throws IoError if the file cannot be opened, FormatError for unsupported
// encodings and ParseError for malformed or truncated files.
AudioBuffer LoadWav(const std::filesystem::path& path,
                    double full_scale_spl_db = kDefaultFullScaleSplDb);

struct WavWriteResult {
  std::size_t clipped_samples = 0;
};

// Writes a canonical 44-byte-header RIFF/WAVE file. Samples outside [-1, 1]
// are clipped and counted; a warning is emitted when any were clipped.
WavWriteResult SaveWav(const AudioBuffer& buffer,
                       const std::filesystem::path& path,
                       WavSampleFormat format = WavSampleFormat::kPcm24);

// Parses "16", "24" or "32f".
WavSampleFormat ParseWavSampleFormat(const std::string& text);

}  // namespace stereoqa

#endif  // STEREOQA_WAV_H_
