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

#include "stereoqa/fusion.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "stereoqa/csv.h"
#include "stereoqa/error.h"
#include "stereoqa/log.h"

namespace stereoqa {

FusedScore MinRule(double opm_dual, double bin_q) {
  return MinRule(opm_dual, bin_q, MinRuleScales{});
}

FusedScore MinRule(double opm_dual, double bin_q, const MinRuleScales& scales) {
  if (!(opm_dual > 0.0) || !(scales.monaural > 0.0)) {
    throw DomainError("min rule: opm_dual and the monaural scale must be positive");
  }
  FusedScore score;
  score.rule = FusionRule::kMinRule;
  score.value = std::min(std::log10(scales.monaural * opm_dual), scales.binaural * bin_q);
  score.components = {{"opm_dual", opm_dual}, {"bin_q", bin_q}};
  return score;
}

double Hinge::Evaluate(std::span<const double> features) const {
  return std::max(0.0, sign * (features[feature] - knot));
}

double HingeTerm::Evaluate(std::span<const double> features) const {
  double value = coefficient;
  for (const Hinge& h : factors) value *= h.Evaluate(features);
  return value;
}

namespace {

using Column = std::vector<double>;

double Dot(const Column& a, const Column& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

// Orthonormal basis of the accepted columns.
class Basis {
 public:
  // Component of `v` orthogonal to the basis, re-orthogonalised twice.
  Column Orthogonalize(Column v) const {
    for (int pass = 0; pass < 2; ++pass) {
      for (const Column& q : columns_) {
        const double d = Dot(q, v);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * q[i];
      }
    }
    return v;
  }

  void Add(Column unit) { columns_.push_back(std::move(unit)); }

 private:
  std::vector<Column> columns_;
};

constexpr double kDependenceTolerance = 1e-10;

// Normalised component of `v` independent of the basis, or empty when `v`
// adds no rank.
Column NewDirection(const Basis& basis, const Column& v) {
  const double norm2 = Dot(v, v);
  if (norm2 <= 0.0) return {};
  Column w = basis.Orthogonalize(v);
  const double rest = Dot(w, w);
  if (rest <= kDependenceTolerance * norm2) return {};
  const double inv = 1.0 / std::sqrt(rest);
  for (double& x : w) x *= inv;
  return w;
}

struct Candidate {
  std::vector<HingeTerm> terms;
  std::vector<Column> columns;
  double reduction = -1.0;
};

}  // namespace

HingeModel FitRegression(const FeatureMatrix& features,
                         std::span<const double> targets,
                         const RegressionOptions& options) {
  const std::size_t n = features.rows;
  const std::size_t k = features.cols;
  if (targets.size() != n || features.values.size() != n * k) {
    throw FitError("fit_regression: targets do not match the feature rows");
  }
  if (n <= 3 * options.max_terms) {
    throw FitError("fit_regression: need more than 3 * max_terms rows");
  }
  if (options.max_degree < 1 || options.max_degree > 2) {
    throw ConfigError("fit_regression: max_degree must be 1 or 2");
  }

  std::vector<std::vector<double>> knots(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double>& values = knots[j];
    for (std::size_t r = 0; r < n; ++r) values.push_back(features.at(r, j));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.size() < 2) {
      Warn("fit_regression: feature " + std::to_string(j) +
           " is constant and is not used");
      values.clear();
    }
  }

  HingeModel model;
  model.num_features = k;
  model.max_terms = options.max_terms;

  Basis basis;
  Column ones(n, 1.0);
  basis.Add(NewDirection(basis, ones));
  Column residual(targets.begin(), targets.end());
  {
    const double mean = Dot(ones, residual) / static_cast<double>(n);
    for (double& v : residual) v -= mean;
  }
  double rss = Dot(residual, residual);
  // Columns of the accepted terms, for parents of interaction candidates.
  std::vector<Column> term_columns;

  while (model.terms.size() < options.max_terms && rss > 0.0) {
    const std::size_t slots = options.max_terms - model.terms.size();
    Candidate best;
    // Parent 0 is the constant term.
    const std::size_t num_parents = options.max_degree == 2 ? model.terms.size() + 1 : 1;
    for (std::size_t parent = 0; parent < num_parents; ++parent) {
      const HingeTerm* parent_term = parent == 0 ? nullptr : &model.terms[parent - 1];
      if (parent_term && parent_term->factors.size() != 1) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (parent_term && parent_term->factors[0].feature == j) continue;
        for (double knot : knots[j]) {
          Candidate candidate;
          for (int sign : {1, -1}) {
            HingeTerm term;
            if (parent_term) term.factors = parent_term->factors;
            term.factors.push_back(Hinge{j, sign, knot});
            Column column(n);
            for (std::size_t r = 0; r < n; ++r) {
              column[r] = std::max(0.0, sign * (features.at(r, j) - knot));
              if (parent_term) column[r] *= term_columns[parent - 1][r];
            }
            candidate.terms.push_back(std::move(term));
            candidate.columns.push_back(std::move(column));
          }
          // Score the pair jointly; with one slot left, the better half only.
          Basis local = basis;
          double pair_reduction = 0.0;
          std::vector<std::size_t> kept;
          std::vector<double> gains;
          for (std::size_t c = 0; c < 2; ++c) {
            Column dir = NewDirection(local, candidate.columns[c]);
            if (dir.empty()) continue;
            const double proj = Dot(dir, residual);
            gains.push_back(proj * proj);
            pair_reduction += proj * proj;
            kept.push_back(c);
            local.Add(std::move(dir));
          }
          if (kept.empty()) continue;
          if (kept.size() > slots) {
            std::size_t pick = 0;
            double single_best = -1.0;
            for (std::size_t c = 0; c < 2; ++c) {
              Column dir = NewDirection(basis, candidate.columns[c]);
              if (dir.empty()) continue;
              const double proj = Dot(dir, residual);
              if (proj * proj > single_best) {
                single_best = proj * proj;
                pick = c;
              }
            }
            kept = {pick};
            pair_reduction = single_best;
          }
          if (pair_reduction > best.reduction) {
            best.reduction = pair_reduction;
            best.terms.clear();
            best.columns.clear();
            for (std::size_t c : kept) {
              best.terms.push_back(candidate.terms[c]);
              best.columns.push_back(candidate.columns[c]);
            }
          }
        }
      }
    }
    if (best.terms.empty() || best.reduction < options.min_relative_improvement * rss) {
      break;
    }
    for (std::size_t c = 0; c < best.terms.size(); ++c) {
      Column dir = NewDirection(basis, best.columns[c]);
      if (dir.empty()) continue;
      const double proj = Dot(dir, residual);
      for (std::size_t r = 0; r < n; ++r) residual[r] -= proj * dir[r];
      basis.Add(std::move(dir));
      model.terms.push_back(best.terms[c]);
      term_columns.push_back(best.columns[c]);
    }
    rss = std::max(0.0, Dot(residual, residual));
  }

  // Final least-squares refit of intercept and coefficients.
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(model.terms.size() + 1);
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    design(r, 0) = 1.0;
    for (Eigen::Index c = 1; c < cols; ++c) {
      design(r, c) = term_columns[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(r)];
    }
    y(r) = targets[static_cast<std::size_t>(r)];
  }
  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
  model.intercept = beta(0);
  for (std::size_t t = 0; t < model.terms.size(); ++t) {
    model.terms[t].coefficient = beta(static_cast<Eigen::Index>(t + 1));
  }
  return model;
}

double Predict(const HingeModel& model, std::span<const double> features) {
  if (features.size() != model.num_features) {
    throw ShapeError("predict: expected " + std::to_string(model.num_features) +
                     " features, got " + std::to_string(features.size()));
  }
  double value = model.intercept;
  for (const HingeTerm& term : model.terms) value += term.Evaluate(features);
  return value;
}

void WriteHingeModel(const HingeModel& model, std::ostream& out) {
  out << "stereoqa-hinge-model 1\n";
  out << "features " << model.num_features << '\n';
  out << "max_terms " << model.max_terms << '\n';
  out << "intercept " << FormatDouble(model.intercept) << '\n';
  for (const HingeTerm& term : model.terms) {
    out << "term " << FormatDouble(term.coefficient) << ' ' << term.factors.size();
    for (const Hinge& h : term.factors) {
      out << ' ' << h.feature << ' ' << h.sign << ' ' << FormatDouble(h.knot);
    }
    out << '\n';
  }
}

namespace {

std::string NextToken(std::istringstream& in, std::size_t line) {
  std::string token;
  if (!(in >> token)) {
    throw ParseError("model line " + std::to_string(line) + ": missing field");
  }
  return token;
}

std::size_t ParseCount(const std::string& token, std::size_t line) {
  const double v = ParseDouble(token, "model line " + std::to_string(line));
  if (v < 0 || v != std::floor(v)) {
    throw ParseError("model line " + std::to_string(line) + ": bad count '" + token + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

HingeModel ReadHingeModel(std::istream& in) {
  HingeModel model;
  std::string text;
  std::size_t line = 0;
  bool saw_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    std::istringstream fields(text);
    const std::string key = NextToken(fields, line);
    const std::string context = "model line " + std::to_string(line);
    if (!saw_header) {
      if (key != "stereoqa-hinge-model" || NextToken(fields, line) != "1") {
        throw ParseError("not a hinge model file (bad header)");
      }
      saw_header = true;
    } else if (key == "features") {
      model.num_features = ParseCount(NextToken(fields, line), line);
    } else if (key == "max_terms") {
      model.max_terms = ParseCount(NextToken(fields, line), line);
    } else if (key == "intercept") {
      model.intercept = ParseDouble(NextToken(fields, line), context);
    } else if (key == "term") {
      HingeTerm term;
      term.coefficient = ParseDouble(NextToken(fields, line), context);
      const std::size_t count = ParseCount(NextToken(fields, line), line);
      for (std::size_t i = 0; i < count; ++i) {
        Hinge h;
        h.feature = ParseCount(NextToken(fields, line), line);
        const double sign = ParseDouble(NextToken(fields, line), context);
        if (sign != 1.0 && sign != -1.0) throw ParseError(context + ": sign must be +-1");
        h.sign = static_cast<int>(sign);
        h.knot = ParseDouble(NextToken(fields, line), context);
        if (h.feature >= model.num_features) {
          throw ParseError(context + ": feature index out of range");
        }
        term.factors.push_back(h);
      }
      model.terms.push_back(std::move(term));
    } else {
      throw ParseError(context + ": unknown record '" + key + "'");
    }
  }
  if (!saw_header) throw ParseError("empty hinge model file");
  return model;
}

void SaveHingeModel(const HingeModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  WriteHingeModel(model, out);
  if (!out) throw IoError("failed writing " + path.string());
}

HingeModel LoadHingeModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return ReadHingeModel(in);
}

TrainingData LoadTrainingCsv(const std::filesystem::path& path) {
  const CsvTable table = ReadCsvFile(path);
  const auto target_col = table.column("target");
  if (!target_col) throw ParseError(path.string() + ": no 'target' column");
  TrainingData data;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c == *target_col) continue;
    feature_cols.push_back(c);
    data.feature_names.push_back(table.header[c]);
  }
  data.features.rows = table.rows.size();
  data.features.cols = feature_cols.size();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string context =
        path.string() + " line " + std::to_string(table.line_numbers[r]);
    for (std::size_t c : feature_cols) {
      data.features.values.push_back(ParseDouble(table.rows[r][c], context));
    }
    data.targets.push_back(ParseDouble(table.rows[r][*target_col], context));
  }
  return data;
}

}  // namespace stereoqa
