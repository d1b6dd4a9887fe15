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

#ifndef STEREOQA_FFT_H_
#define STEREOQA_FFT_H_

#include <complex>
#include <cstddef>
#include <span>

namespace stereoqa {

// Unnormalised real FFT of `input` (length n) into n/2 + 1 bins.
void RealFft(std::span<const double> input,
             std::span<std::complex<double>> output);

// Inverse of RealFft including the 1/n factor: `output` has length n and
// `input` n/2 + 1 bins.
void InverseRealFft(std::span<const std::complex<double>> input,
                    std::span<double> output);

}  // namespace stereoqa

#endif  // STEREOQA_FFT_H_
