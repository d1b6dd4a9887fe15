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

#include "stereoqa/fft.h"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "stereoqa/error.h"

namespace stereoqa {
namespace {

// FFTW planning is not thread-safe, execution with the new-array interface
// is. Plans are created once per size under a lock and kept for the process
// lifetime. FFTW_ESTIMATE keeps the chosen algorithm, and therefore the
// rounding, identical from run to run.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

const PlanPair& PlansFor(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> plans;
  std::lock_guard lock(mutex);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  std::vector<double> real(n);
  std::vector<std::complex<double>> spectrum(n / 2 + 1);
  auto* complex_ptr = reinterpret_cast<fftw_complex*>(spectrum.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair pair;
  pair.forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(),
                                      complex_ptr, flags);
  pair.inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), complex_ptr,
                                      real.data(), flags | FFTW_DESTROY_INPUT);
  if (pair.forward == nullptr || pair.inverse == nullptr) {
    throw Error("FFTW planning failed for size " + std::to_string(n));
  }
  return plans.emplace(n, pair).first->second;
}

}  // namespace

void RealFft(std::span<const double> input,
             std::span<std::complex<double>> output) {
  const std::size_t n = input.size();
  if (n == 0 || output.size() != n / 2 + 1) {
    throw ShapeError("RealFft: output must hold n/2 + 1 bins");
  }
  const auto& plans = PlansFor(n);
  // r2c does not modify its input; the cast only satisfies the C signature.
  fftw_execute_dft_r2c(plans.forward, const_cast<double*>(input.data()),
                       reinterpret_cast<fftw_complex*>(output.data()));
}

void InverseRealFft(std::span<const std::complex<double>> input,
                    std::span<double> output) {
  const std::size_t n = output.size();
  if (n == 0 || input.size() != n / 2 + 1) {
    throw ShapeError("InverseRealFft: input must hold n/2 + 1 bins");
  }
  const auto& plans = PlansFor(n);
  // c2r destroys its input, so work on a copy.
  std::vector<std::complex<double>> scratch(input.begin(), input.end());
  fftw_execute_dft_c2r(plans.inverse,
                       reinterpret_cast<fftw_complex*>(scratch.data()),
                       output.data());
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : output) v *= scale;
}

}  // namespace stereoqa
