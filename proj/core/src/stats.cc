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

#include "stereoqa/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "stereoqa/error.h"

namespace stereoqa {
namespace {

double Mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double Clamp(double r) { return std::clamp(r, -kFisherClamp, kFisherClamp); }

}  // namespace

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DegenerateInputError("pearson: inputs differ in length");
  }
  if (x.size() < 3) throw DegenerateInputError("pearson: fewer than 3 points");
  const double mx = Mean(x);
  const double my = Mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DegenerateInputError("pearson: constant input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double PoolFisher(std::span<const double> rs,
                  std::optional<std::span<const std::size_t>> ns) {
  if (rs.empty()) throw DegenerateInputError("pool_fisher: empty list");
  if (ns && ns->size() != rs.size()) {
    throw DegenerateInputError("pool_fisher: counts differ in length");
  }
  double sum = 0.0;
  double weight = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    double w = 1.0;
    if (ns) {
      if ((*ns)[i] < 4) throw DegenerateInputError("pool_fisher: n < 4");
      w = static_cast<double>((*ns)[i] - 3);
    }
    sum += w * std::atanh(Clamp(rs[i]));
    weight += w;
  }
  return std::tanh(sum / weight);
}

ConfidenceInterval Ci95(double r, std::size_t n) {
  if (n < 4) throw DegenerateInputError("ci95: n < 4");
  const double rc = Clamp(r);
  const double z = std::atanh(rc);
  const double half = 1.96 / std::sqrt(static_cast<double>(n - 3));
  return {std::tanh(z + half) - rc, rc - std::tanh(z - half)};
}

double CubicMapping::operator()(double x) const {
  const auto& c = coefficients;
  return c[0] + x * (c[1] + x * (c[2] + x * c[3]));
}

namespace {

using Vec4 = Eigen::Vector4d;

// Derivative of sum a_k u^k at u, as a row acting on a.
Eigen::RowVector4d DerivativeRow(double u) {
  return {0.0, 1.0, 2.0 * u, 3.0 * u * u};
}

// min |A a - y|^2 subject to G a >= 0 by a primal active-set method started
// from the feasible point `a`.
Vec4 ActiveSetLeastSquares(const Eigen::MatrixXd& design,
                           const Eigen::VectorXd& y,
                           const Eigen::MatrixXd& constraints, Vec4 a) {
  Eigen::Matrix4d hessian = 2.0 * design.transpose() * design;
  hessian.diagonal().array() += 1e-12 * std::max(hessian.trace(), 1.0);
  const Vec4 linear = -2.0 * design.transpose() * y;
  std::vector<Eigen::Index> working;
  const double tol = 1e-12;

  for (int iter = 0; iter < 500; ++iter) {
    const Vec4 gradient = hessian * a + linear;
    Eigen::MatrixXd active(static_cast<Eigen::Index>(working.size()), 4);
    for (std::size_t i = 0; i < working.size(); ++i) {
      active.row(static_cast<Eigen::Index>(i)) = constraints.row(working[i]);
    }
    Vec4 step = Vec4::Zero();
    Eigen::MatrixXd basis;
    if (working.empty()) {
      basis = Eigen::Matrix4d::Identity();
    } else {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(active);
      basis = lu.kernel();
    }
    if (basis.cols() > 0 && basis.norm() > 0.0) {
      const Eigen::MatrixXd reduced = basis.transpose() * hessian * basis;
      step = basis * reduced.ldlt().solve(-basis.transpose() * gradient);
    }
    if (step.norm() <= tol * (1.0 + a.norm())) {
      if (working.empty()) return a;
      const Eigen::VectorXd lambda =
          active.transpose().completeOrthogonalDecomposition().solve(gradient);
      Eigen::Index worst = 0;
      const double min_lambda = lambda.minCoeff(&worst);
      if (min_lambda >= -tol) return a;
      working.erase(working.begin() + worst);
      continue;
    }
    double alpha = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index i = 0; i < constraints.rows(); ++i) {
      if (std::find(working.begin(), working.end(), i) != working.end()) continue;
      const double rate = constraints.row(i).dot(step);
      if (rate >= -tol) continue;
      const double ratio = std::max(0.0, constraints.row(i).dot(a)) / -rate;
      if (ratio < alpha) {
        alpha = ratio;
        blocking = i;
      }
    }
    a += alpha * step;
    if (blocking >= 0) working.push_back(blocking);
  }
  return a;
}

}  // namespace

CubicMapping FitThirdOrderMapping(std::span<const double> objective,
                                  std::span<const double> subjective,
                                  const CubicFitOptions& options) {
  if (objective.size() != subjective.size()) {
    throw DegenerateInputError("cubic mapping: inputs differ in length");
  }
  const std::size_t n = objective.size();
  if (n < 5) throw DegenerateInputError("cubic mapping: fewer than 5 points");
  const double mx = Mean(objective);
  double var = 0.0;
  for (double x : objective) var += (x - mx) * (x - mx);
  const double sx = std::sqrt(var / static_cast<double>(n));
  if (!(sx > 0.0)) throw DegenerateInputError("cubic mapping: constant objective");

  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd design(rows, 4);
  Eigen::VectorXd y(rows);
  double umin = std::numeric_limits<double>::infinity();
  double umax = -umin;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double u = (objective[static_cast<std::size_t>(i)] - mx) / sx;
    design.row(i) << 1.0, u, u * u, u * u * u;
    y(i) = subjective[static_cast<std::size_t>(i)];
    umin = std::min(umin, u);
    umax = std::max(umax, u);
  }
  Vec4 a = design.completeOrthogonalDecomposition().solve(y);

  const std::size_t grid = std::max<std::size_t>(options.monotonic_grid_points, 2);
  Eigen::MatrixXd derivative(static_cast<Eigen::Index>(grid), 4);
  for (std::size_t g = 0; g < grid; ++g) {
    const double u = umin + (umax - umin) * static_cast<double>(g) /
                                static_cast<double>(grid - 1);
    derivative.row(static_cast<Eigen::Index>(g)) = DerivativeRow(u);
  }
  CubicMapping mapping;
  if (options.enforce_monotonic) {
    const Eigen::VectorXd slopes = derivative * a;
    const double scale = 1e-12 * (std::abs(a(1)) + std::abs(a(2)) + std::abs(a(3)));
    const bool rises = slopes.maxCoeff() > scale;
    const bool falls = slopes.minCoeff() < -scale;
    if (rises && falls) {
      double sxy = 0.0;
      const double my = Mean(subjective);
      for (std::size_t i = 0; i < n; ++i) {
        sxy += (objective[i] - mx) * (subjective[i] - my);
      }
      const double sign = sxy < 0.0 ? -1.0 : 1.0;
      Vec4 start = Vec4::Zero();
      start(0) = y.mean();
      a = ActiveSetLeastSquares(design, y, sign * derivative, start);
      mapping.constrained = true;
    }
  }

  // Expand sum a_k ((x - mx) / sx)^k into powers of x.
  const double binomial[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  for (int k = 0; k < 4; ++k) {
    const double scaled = a(k) / std::pow(sx, k);
    for (int j = 0; j <= k; ++j) {
      mapping.coefficients[static_cast<std::size_t>(j)] +=
          scaled * binomial[k][j] * std::pow(-mx, k - j);
    }
  }
  return mapping;
}

}  // namespace stereoqa
