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

#include "stereoqa/wav.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "stereoqa/error.h"
#include "stereoqa/log.h"

namespace stereoqa {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void PutU32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<unsigned char>((v >> shift) & 0xFF));
  }
}

void PutTag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

FormatChunk ParseFormat(const unsigned char* p, std::uint32_t size) {
  if (size < 16) throw ParseError("fmt chunk shorter than 16 bytes");
  FormatChunk fmt;
  fmt.format = ReadU16(p);
  fmt.channels = ReadU16(p + 2);
  fmt.sample_rate = ReadU32(p + 4);
  fmt.block_align = ReadU16(p + 12);
  fmt.bits = ReadU16(p + 14);
  if (fmt.format == kFormatExtensible) {
    if (size < 40) throw ParseError("truncated WAVE_FORMAT_EXTENSIBLE header");
    // The first two bytes of the sub-format GUID carry the plain format tag.
    fmt.format = ReadU16(p + 24);
  }
  return fmt;
}

}  // namespace

WavSampleFormat ParseWavSampleFormat(const std::string& text) {
  if (text == "16") return WavSampleFormat::kPcm16;
  if (text == "24") return WavSampleFormat::kPcm24;
  if (text == "32f" || text == "32") return WavSampleFormat::kFloat32;
  throw ConfigError("unsupported WAV bit depth '" + text +
                    "' (expected 16, 24 or 32f)");
}

AudioBuffer LoadWav(const std::filesystem::path& path,
                    double full_scale_spl_db) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path.string());
  const std::vector<unsigned char> bytes(
      (std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  const std::string where = " in " + path.string();

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw ParseError("not a RIFF/WAVE file" + where);
  }

  FormatChunk fmt;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::uint32_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* header = bytes.data() + pos;
    const std::uint32_t size = ReadU32(header + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(header, "data", 4) == 0) {
      if (body + size > bytes.size()) {
        throw ParseError("truncated data chunk" + where);
      }
      data = bytes.data() + body;
      data_size = size;
    } else {
      if (body + size > bytes.size()) {
        throw ParseError("truncated chunk" + where);
      }
      if (std::memcmp(header, "fmt ", 4) == 0) {
        fmt = ParseFormat(bytes.data() + body, size);
        have_fmt = true;
      }
    }
    // Chunks are padded to an even size.
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw ParseError("missing fmt chunk" + where);
  if (data == nullptr) throw ParseError("missing data chunk" + where);

  const bool is_pcm = fmt.format == kFormatPcm &&
                      (fmt.bits == 16 || fmt.bits == 24);
  const bool is_float = fmt.format == kFormatFloat && fmt.bits == 32;
  if (!is_pcm && !is_float) {
    throw FormatError("unsupported encoding (format " +
                      std::to_string(fmt.format) + ", " +
                      std::to_string(fmt.bits) + " bits)" + where);
  }
  if (fmt.channels != 1 && fmt.channels != 2) {
    throw FormatError("unsupported channel count " +
                      std::to_string(fmt.channels) + where);
  }
  const std::size_t bytes_per_sample = fmt.bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
  if (fmt.block_align != frame_bytes) {
    throw ParseError("inconsistent block alignment" + where);
  }
  if (data_size % frame_bytes != 0) {
    throw ParseError("data chunk is not a whole number of frames" + where);
  }
  const std::size_t frames = data_size / frame_bytes;

  std::vector<std::vector<double>> channels(fmt.channels,
                                            std::vector<double>(frames));
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < fmt.channels; ++c) {
      const unsigned char* p = data + i * frame_bytes + c * bytes_per_sample;
      double value;
      if (is_float) {
        float f;
        std::uint32_t bits = ReadU32(p);
        std::memcpy(&f, &bits, sizeof f);
        value = f;
      } else if (fmt.bits == 16) {
        value = static_cast<std::int16_t>(ReadU16(p)) / 32768.0;
      } else {
        std::int32_t v = static_cast<std::int32_t>(
            (static_cast<std::uint32_t>(p[0]) << 8) |
            (static_cast<std::uint32_t>(p[1]) << 16) |
            (static_cast<std::uint32_t>(p[2]) << 24));
        value = (v >> 8) / 8388608.0;
      }
      channels[c][i] = value;
    }
  }
  try {
    return AudioBuffer(static_cast<int>(fmt.sample_rate), std::move(channels),
                       full_scale_spl_db);
  } catch (const ConfigError& e) {
    throw FormatError(std::string(e.what()) + where);
  }
}

WavWriteResult SaveWav(const AudioBuffer& buffer,
                       const std::filesystem::path& path,
                       WavSampleFormat format) {
  const std::uint16_t bits = format == WavSampleFormat::kPcm16 ? 16
                             : format == WavSampleFormat::kPcm24 ? 24
                                                                 : 32;
  const std::uint16_t tag =
      format == WavSampleFormat::kFloat32 ? kFormatFloat : kFormatPcm;
  const auto channels = static_cast<std::uint16_t>(buffer.num_channels());
  const std::size_t frames = buffer.num_samples();
  const std::uint16_t block_align = channels * (bits / 8);
  const std::uint64_t data_size = std::uint64_t{frames} * block_align;
  if (data_size + 36 > 0xFFFFFFFFULL) {
    throw IoError("audio too long for a RIFF file: " + path.string());
  }

  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  PutTag(out, "RIFF");
  PutU32(out, static_cast<std::uint32_t>(36 + data_size));
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, tag);
  PutU16(out, channels);
  PutU32(out, static_cast<std::uint32_t>(buffer.sample_rate_hz()));
  PutU32(out, static_cast<std::uint32_t>(buffer.sample_rate_hz()) * block_align);
  PutU16(out, block_align);
  PutU16(out, bits);
  PutTag(out, "data");
  PutU32(out, static_cast<std::uint32_t>(data_size));

  WavWriteResult result;
  const double scale = bits == 16 ? 32768.0 : 8388608.0;
  const double max_code = scale - 1.0;
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      double sample = buffer.channel(c)[i];
      if (sample > 1.0 || sample < -1.0) {
        ++result.clipped_samples;
        sample = std::clamp(sample, -1.0, 1.0);
      }
      if (format == WavSampleFormat::kFloat32) {
        const float f = static_cast<float>(sample);
        std::uint32_t word;
        std::memcpy(&word, &f, sizeof word);
        PutU32(out, word);
        continue;
      }
      const auto code = static_cast<std::int32_t>(
          std::clamp(std::nearbyint(sample * scale), -scale, max_code));
      const auto word = static_cast<std::uint32_t>(code);
      out.push_back(static_cast<unsigned char>(word & 0xFF));
      out.push_back(static_cast<unsigned char>((word >> 8) & 0xFF));
      if (bits == 24) out.push_back(static_cast<unsigned char>((word >> 16) & 0xFF));
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("write failed for " + path.string());

  if (result.clipped_samples > 0) {
    Warn(std::to_string(result.clipped_samples) + " sample(s) clipped while writing " +
         path.string());
  }
  return result;
}

}  // namespace stereoqa
