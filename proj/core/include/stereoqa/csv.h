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

#ifndef STEREOQA_CSV_H_
#define STEREOQA_CSV_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stereoqa {

// Minimal RFC 4180 reader/writer: comma separated, double-quoted fields may
// contain commas, quotes ("") and newlines.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based source line of each row, for error messages.
  std::vector<std::size_t> line_numbers;

  // Column index of `name`, if present.
  std::optional<std::size_t> column(std::string_view name) const;
};

// Throws ParseError on unterminated quotes or rows whose width differs from
// the header.
CsvTable ParseCsv(std::istream& in);
// Throws IoError if the file cannot be opened.
CsvTable ReadCsvFile(const std::filesystem::path& path);

std::string CsvEscape(std::string_view field);
void WriteCsvRow(std::ostream& out, const std::vector<std::string>& fields);

// Shortest round-trippable decimal representation.
std::string FormatDouble(double value);
// Throws ParseError with `context` in the message on malformed numbers.
double ParseDouble(std::string_view text, std::string_view context);

}  // namespace stereoqa

#endif  // STEREOQA_CSV_H_
