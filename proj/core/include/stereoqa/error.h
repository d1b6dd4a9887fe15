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

#ifndef STEREOQA_ERROR_H_
#define STEREOQA_ERROR_H_

#include <stdexcept>
#include <string>

namespace stereoqa {

// Root of every exception thrown by the library. Subclasses name the failure
// category so callers (and the CLI exit-code mapping) can tell them apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define STEREOQA_DEFINE_ERROR(Name) \
  class Name : public Error {       \
   public:                          \
    using Error::Error;             \
  }

STEREOQA_DEFINE_ERROR(FormatError);      // unsupported codec / bit depth
STEREOQA_DEFINE_ERROR(ParseError);       // malformed or truncated input
STEREOQA_DEFINE_ERROR(IoError);          // file system failures
STEREOQA_DEFINE_ERROR(ArityError);       // wrong channel count
STEREOQA_DEFINE_ERROR(AlignmentError);   // length / sample-rate mismatch
STEREOQA_DEFINE_ERROR(ShapeError);       // frame/band geometry mismatch
STEREOQA_DEFINE_ERROR(ConfigError);      // bad option or label
STEREOQA_DEFINE_ERROR(DomainError);      // argument outside a formula's domain
STEREOQA_DEFINE_ERROR(DegenerateInputError);
STEREOQA_DEFINE_ERROR(FitError);
STEREOQA_DEFINE_ERROR(ValidationError);

#undef STEREOQA_DEFINE_ERROR

}  // namespace stereoqa

#endif  // STEREOQA_ERROR_H_
