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

#ifndef STEREOQA_RNG_H_
#define STEREOQA_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace stereoqa {

// Seeded generator whose output sequence is identical on every platform:
// std::mt19937_64 is fully specified, the distribution transforms below are
// ours rather than the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextBits() { return engine_(); }
  // Uniform in [0, 1).
  double Uniform();
  // Standard normal via Box-Muller.
  double Gaussian();
  // Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t Below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a over `text`, folded into `seed` with a splitmix64 finaliser.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view text);

}  // namespace stereoqa

#endif  // STEREOQA_RNG_H_
