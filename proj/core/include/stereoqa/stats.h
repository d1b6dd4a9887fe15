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

#ifndef STEREOQA_STATS_H_
#define STEREOQA_STATS_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>

namespace stereoqa {

// Sample Pearson correlation. Throws DegenerateInputError for fewer than 3
// points, mismatched lengths or a constant input.
double Pearson(std::span<const double> x, std::span<const double> y);

inline constexpr double kFisherClamp = 1.0 - 1e-7;

// Mean of atanh(r) mapped back with tanh. With counts, the mean is weighted
// by (n - 3). Inputs are clamped to +-(1 - 1e-7) first. Throws
// DegenerateInputError for an empty list, mismatched lengths or n < 4.
double PoolFisher(std::span<const double> rs,
                  std::optional<std::span<const std::size_t>> ns = std::nullopt);

struct ConfidenceInterval {
  double upper = 0.0;  // tanh(atanh r + 1.96/sqrt(n-3)) - r
  double lower = 0.0;  // r - tanh(atanh r - 1.96/sqrt(n-3))
};

// 95% half-widths of a correlation via the Fisher z transform. Throws
// DegenerateInputError for n < 4.
ConfidenceInterval Ci95(double r, std::size_t n);

// p(x) = c0 + c1 x + c2 x^2 + c3 x^3 fitted from objective to subjective
// scores.
struct CubicMapping {
  std::array<double, 4> coefficients{};
  // True when the unconstrained fit was not monotonic on the data range and
  // the monotonicity-constrained refit was used.
  bool constrained = false;

  double operator()(double x) const;
};

struct CubicFitOptions {
  // Refit with a derivative sign constraint if the free fit is non-monotonic.
  bool enforce_monotonic = true;
  std::size_t monotonic_grid_points = 101;
};

// Least-squares third-order mapping. Throws DegenerateInputError for fewer
// than 5 points, mismatched lengths or a constant objective.
CubicMapping FitThirdOrderMapping(std::span<const double> objective,
                                  std::span<const double> subjective,
                                  const CubicFitOptions& options = {});

}  // namespace stereoqa

#endif  // STEREOQA_STATS_H_
