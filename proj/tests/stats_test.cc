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

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include <gtest/gtest.h>

#include "stats_oracle_cases.h"
#include "stereoqa/error.h"
#include "stereoqa/rng.h"
#include "stereoqa/stats.h"

namespace stereoqa {
namespace {

TEST(PearsonTest, MatchesOracle) {
  for (const oracle::PearsonCase& c : oracle::PearsonCases()) {
    EXPECT_NEAR(Pearson(c.x, c.y), c.r, 1e-9);
  }
}

TEST(PearsonTest, PerfectCorrelation) {
  const std::vector<double> x{1.0, 2.5, 3.0, 7.0};
  std::vector<double> neg;
  for (double v : x) neg.push_back(-v);
  EXPECT_DOUBLE_EQ(Pearson(x, x), 1.0);
  EXPECT_DOUBLE_EQ(Pearson(x, neg), -1.0);
}

TEST(PearsonTest, AffineInvariance) {
  Rng rng(1);
  std::vector<double> x, y, x2, y2;
  for (int i = 0; i < 30; ++i) {
    x.push_back(rng.Gaussian());
    y.push_back(x.back() + rng.Gaussian());
    x2.push_back(3.5 * x.back() - 10.0);
    y2.push_back(0.01 * y.back() + 1e3);
  }
  EXPECT_NEAR(Pearson(x, y), Pearson(x2, y2), 1e-12);
}

TEST(PearsonTest, Degenerate) {
  EXPECT_THROW(Pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DegenerateInputError);
  EXPECT_THROW(Pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), DegenerateInputError);
  EXPECT_THROW(Pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), DegenerateInputError);
}

TEST(PoolFisherTest, MatchesOracle) {
  for (const oracle::PoolCase& c : oracle::PoolCases()) {
    if (c.ns.empty()) {
      EXPECT_NEAR(PoolFisher(c.rs), c.pooled, 1e-9);
    } else {
      EXPECT_NEAR(PoolFisher(c.rs, std::span<const std::size_t>(c.ns)), c.pooled, 1e-9);
    }
  }
}

TEST(PoolFisherTest, FixedPointsAndClamp) {
  EXPECT_NEAR(PoolFisher(std::vector<double>{0.42}), 0.42, 1e-15);
  EXPECT_NEAR(PoolFisher(std::vector<double>{0.7, 0.7, 0.7}), 0.7, 1e-15);
  const double clamped = PoolFisher(std::vector<double>{1.0});
  EXPECT_TRUE(std::isfinite(clamped));
  EXPECT_GT(clamped, 0.9999);
}

TEST(PoolFisherTest, Degenerate) {
  EXPECT_THROW(PoolFisher(std::vector<double>{}), DegenerateInputError);
  const std::vector<std::size_t> short_n{3, 10};
  EXPECT_THROW(PoolFisher(std::vector<double>{0.1, 0.2}, std::span<const std::size_t>(short_n)),
               DegenerateInputError);
  const std::vector<std::size_t> one{10};
  EXPECT_THROW(PoolFisher(std::vector<double>{0.1, 0.2}, std::span<const std::size_t>(one)),
               DegenerateInputError);
}

TEST(Ci95Test, MatchesOracle) {
  for (const oracle::CiCase& c : oracle::CiCases()) {
    const ConfidenceInterval ci = Ci95(c.r, c.n);
    EXPECT_NEAR(ci.upper, c.upper, 1e-9);
    EXPECT_NEAR(ci.lower, c.lower, 1e-9);
  }
}

TEST(Ci95Test, AnalyticAndLimit) {
  EXPECT_NEAR(Ci95(0.0, 403).upper, std::tanh(1.96 / 20.0), 1e-15);
  double previous = 1e9;
  for (std::size_t n = 4; n < 100000; n *= 2) {
    const double w = Ci95(0.6, n).upper;
    EXPECT_LT(w, previous);
    previous = w;
  }
  EXPECT_LT(previous, 0.01);
  EXPECT_THROW(Ci95(0.5, 3), DegenerateInputError);
}

TEST(CubicMappingTest, ExactLinear) {
  std::vector<double> x, y;
  for (int i = 0; i < 10; ++i) {
    x.push_back(0.3 * i - 1.0);
    y.push_back(2.0 * x.back() + 3.0);
  }
  const CubicMapping m = FitThirdOrderMapping(x, y);
  EXPECT_NEAR(m.coefficients[0], 3.0, 1e-9);
  EXPECT_NEAR(m.coefficients[1], 2.0, 1e-9);
  EXPECT_NEAR(m.coefficients[2], 0.0, 1e-9);
  EXPECT_NEAR(m.coefficients[3], 0.0, 1e-9);
  EXPECT_FALSE(m.constrained);
  std::vector<double> mapped;
  for (double v : x) mapped.push_back(m(v));
  EXPECT_NEAR(Pearson(mapped, y), 1.0, 1e-12);
}

TEST(CubicMappingTest, CubeOnGridImproves) {
  std::vector<double> x, y;
  for (int i = 0; i <= 20; ++i) {
    x.push_back(-1.0 + 0.1 * i);
    y.push_back(std::pow(x.back(), 3.0));
  }
  const CubicMapping m = FitThirdOrderMapping(x, y);
  std::vector<double> mapped;
  for (double v : x) mapped.push_back(m(v));
  EXPECT_GE(Pearson(mapped, y), Pearson(x, y));
  EXPECT_NEAR(Pearson(mapped, y), 1.0, 1e-9);
}

double MappedR(const std::vector<double>& x, const std::vector<double>& y, const CubicMapping& m) {
  std::vector<double> mapped;
  for (double v : x) mapped.push_back(m(v));
  return Pearson(mapped, y);
}

TEST(CubicMappingTest, NestedModelProperty) {
  CubicFitOptions free;
  free.enforce_monotonic = false;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const int n = 6 + static_cast<int>(rng.Below(40));
    std::vector<double> x, y;
    for (int i = 0; i < n; ++i) {
      x.push_back(rng.Gaussian());
      y.push_back(std::sin(2.0 * x.back()) + 0.5 * rng.Gaussian());
    }
    const CubicMapping m = FitThirdOrderMapping(x, y, free);
    EXPECT_GE(std::abs(MappedR(x, y, m)), std::abs(Pearson(x, y)) - 1e-12) << seed;
  }
}

TEST(CubicMappingTest, ConstrainedFitIsMonotonic) {
  std::vector<double> x, y;
  for (int i = 0; i <= 30; ++i) {
    x.push_back(i / 30.0);
    y.push_back(std::sin(3.0 * 3.14159 * x.back()) + 2.0 * x.back());
  }
  const CubicMapping m = FitThirdOrderMapping(x, y);
  EXPECT_TRUE(m.constrained);
  for (int i = 1; i <= 100; ++i) {
    EXPECT_GE(m(i / 100.0), m((i - 1) / 100.0) - 1e-12);
  }
  CubicFitOptions free;
  free.enforce_monotonic = false;
  EXPECT_FALSE(FitThirdOrderMapping(x, y, free).constrained);
}

TEST(CubicMappingTest, Degenerate) {
  const std::vector<double> four{1, 2, 3, 4};
  EXPECT_THROW(FitThirdOrderMapping(four, four), DegenerateInputError);
  const std::vector<double> flat{1, 1, 1, 1, 1}, five{1, 2, 3, 4, 5};
  EXPECT_THROW(FitThirdOrderMapping(flat, five), DegenerateInputError);
}

}  // namespace
}  // namespace stereoqa
