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

#ifndef STEREOQA_FUSION_H_
#define STEREOQA_FUSION_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stereoqa {

inline constexpr double kMinRuleMonauralScale = 0.0528;
inline constexpr double kMinRuleBinauralScale = 0.0078;

enum class FusionRule { kMinRule, kRegression };

struct FusedScore {
  double value = 0.0;
  FusionRule rule = FusionRule::kMinRule;
  std::vector<std::pair<std::string, double>> components;
};

// min(log10(0.0528 * opm_dual), 0.0078 * bin_q): the overall quality follows
// whichever of the monaural and binaural estimates is more degraded.
// Throws DomainError if opm_dual <= 0.
FusedScore MinRule(double opm_dual, double bin_q);

struct MinRuleScales {
  double monaural = kMinRuleMonauralScale;
  double binaural = kMinRuleBinauralScale;
};
// min(log10(monaural * opm_dual), binaural * bin_q). Throws DomainError if
// opm_dual or monaural is not positive.
FusedScore MinRule(double opm_dual, double bin_q, const MinRuleScales& scales);

// One factor max(0, sign * (x[feature] - knot)) of a basis term.
struct Hinge {
  std::size_t feature = 0;
  int sign = 1;  // +1 or -1
  double knot = 0.0;

  double Evaluate(std::span<const double> features) const;
  friend bool operator==(const Hinge&, const Hinge&) = default;
};

struct HingeTerm {
  std::vector<Hinge> factors;  // product of hinges
  double coefficient = 0.0;

  double Evaluate(std::span<const double> features) const;
  friend bool operator==(const HingeTerm&, const HingeTerm&) = default;
};

struct HingeModel {
  std::size_t num_features = 0;
  double intercept = 0.0;
  std::vector<HingeTerm> terms;
  std::size_t max_terms = 0;

  friend bool operator==(const HingeModel&, const HingeModel&) = default;
};

struct RegressionOptions {
  std::size_t max_terms = 10;
  // 1: additive hinges only. 2: a hinge may multiply an existing
  // single-hinge term on a different feature.
  int max_degree = 1;
  double min_relative_improvement = 1e-4;
};

// Row-major N x K feature matrix.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols, cols};
  }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

// Forward stagewise hinge regression (additive MARS forward pass). Each step
// adds the reflected hinge pair with an observed-value knot that lowers the
// residual sum of squares most and refits all coefficients by least squares.
// Columns that would make the basis rank-deficient are dropped; constant
// feature columns are never split. Throws FitError if
// N <= 3 * max_terms or the targets do not match the rows.
HingeModel FitRegression(const FeatureMatrix& features,
                         std::span<const double> targets,
                         const RegressionOptions& options = {});

// Throws ShapeError if the feature count differs from the training data.
double Predict(const HingeModel& model, std::span<const double> features);

// Text format, one record per line:
//   stereoqa-hinge-model 1
//   features <K>
//   max_terms <M>
//   intercept <value>
//   term <coefficient> <factor count> {<feature> <sign> <knot>}...
void WriteHingeModel(const HingeModel& model, std::ostream& out);
HingeModel ReadHingeModel(std::istream& in);
void SaveHingeModel(const HingeModel& model, const std::filesystem::path& path);
HingeModel LoadHingeModel(const std::filesystem::path& path);

// Training CSV: feature columns followed by (or containing) a `target`
// column. Returns the features in file column order, excluding target.
struct TrainingData {
  std::vector<std::string> feature_names;
  FeatureMatrix features;
  std::vector<double> targets;
};
TrainingData LoadTrainingCsv(const std::filesystem::path& path);

}  // namespace stereoqa

#endif  // STEREOQA_FUSION_H_
