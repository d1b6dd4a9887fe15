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

#ifndef STEREOQA_LOG_H_
#define STEREOQA_LOG_H_

#include <functional>
#include <string>

namespace stereoqa {

// Non-fatal diagnostics (clipping, skipped groups, missing references) are
// routed through a process-wide sink. The default writes to stderr.
using WarningSink = std::function<void(const std::string&)>;

// Installs `sink` and returns the previous one. Passing an empty function
// silences warnings.
WarningSink SetWarningSink(WarningSink sink);

void Warn(const std::string& message);

}  // namespace stereoqa

#endif  // STEREOQA_LOG_H_
