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

#include "stereoqa/evalharness.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>
#include <utility>

#include <nlohmann/json.hpp>

#include "stereoqa/csv.h"
#include "stereoqa/error.h"
#include "stereoqa/stats.h"

namespace stereoqa {

const std::vector<ItemMetadata>& StandardItems() {
  static const std::vector<ItemMetadata> items{
      {"Violin", false, "Solo violin"},
      {"Glock", false, "Solo glockenspiel"},
      {"RnB", false, "RnB music"},
      {"Pop", false, "Instrumental pop music"},
      {"panDialogF", true, "Hard-panned female speech and background music"},
      {"panDialogM", true, "Hard-panned male dialog with background music"},
  };
  return items;
}

namespace {

std::size_t RequireColumn(const CsvTable& table, std::string_view name,
                          std::string_view what) {
  const auto col = table.column(name);
  if (!col) {
    throw ValidationError(std::string(what) + ": missing required column '" +
                          std::string(name) + "'");
  }
  return *col;
}

std::string JoinErrors(const std::vector<std::string>& errors) {
  std::string message;
  for (const std::string& e : errors) {
    if (!message.empty()) message += "; ";
    message += e;
  }
  return message;
}

}  // namespace

IngestResult IngestScores(std::istream& in) {
  const CsvTable table = ParseCsv(in);
  const std::size_t c_item = RequireColumn(table, "item", "scores");
  const std::size_t c_exp = RequireColumn(table, "experiment", "scores");
  const std::size_t c_cond = RequireColumn(table, "condition", "scores");
  const std::size_t c_listener = RequireColumn(table, "listener_id", "scores");
  const std::size_t c_score = RequireColumn(table, "score", "scores");

  IngestResult result;
  std::vector<std::string> errors;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "line " + std::to_string(table.line_numbers[r]);
    if (row[c_item].empty() || row[c_cond].empty() || row[c_listener].empty()) {
      errors.push_back(where + ": empty item, condition or listener_id");
      continue;
    }
    SubjectiveRecord record;
    record.item = row[c_item];
    record.condition = row[c_cond];
    record.listener_id = row[c_listener];
    try {
      record.experiment = ParseExperiment(row[c_exp]);
    } catch (const ConfigError&) {
      errors.push_back(where + ": unknown experiment '" + row[c_exp] + "'");
      continue;
    }
    try {
      record.score = ParseDouble(row[c_score], where);
    } catch (const ParseError& e) {
      errors.push_back(e.what());
      continue;
    }
    if (!(record.score >= 0.0 && record.score <= 100.0)) {
      errors.push_back(where + ": score " + row[c_score] + " outside [0, 100]");
      continue;
    }
    result.records.push_back(std::move(record));
  }
  if (!errors.empty()) {
    throw ValidationError("invalid subjective scores: " + JoinErrors(errors));
  }

  std::set<std::pair<std::string, Experiment>> trials;
  std::set<std::pair<std::string, Experiment>> with_reference;
  for (const SubjectiveRecord& rec : result.records) {
    trials.emplace(rec.item, rec.experiment);
    if (rec.condition == kHiddenReference) with_reference.emplace(rec.item, rec.experiment);
  }
  for (const auto& trial : trials) {
    if (!with_reference.count(trial)) {
      result.warnings.push_back("trial " + trial.first + "/" +
                                std::string(ExperimentName(trial.second)) +
                                " has no hidden_reference condition");
    }
  }
  return result;
}

IngestResult IngestScores(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return IngestScores(in);
}

std::vector<ObjectiveRecord> IngestObjective(std::istream& in) {
  const CsvTable table = ParseCsv(in);
  const std::size_t c_item = RequireColumn(table, "item", "objective");
  const std::size_t c_cond = RequireColumn(table, "condition", "objective");
  const std::size_t c_metric = RequireColumn(table, "metric", "objective");
  const std::size_t c_value = RequireColumn(table, "value", "objective");
  const auto c_exp = table.column("experiment");

  std::vector<ObjectiveRecord> records;
  std::vector<std::string> errors;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "line " + std::to_string(table.line_numbers[r]);
    ObjectiveRecord record;
    record.item = row[c_item];
    record.condition = row[c_cond];
    record.metric = row[c_metric];
    if (c_exp) record.experiment = row[*c_exp];
    if (record.item.empty() || record.condition.empty() || record.metric.empty()) {
      errors.push_back(where + ": empty item, condition or metric");
      continue;
    }
    if (!record.experiment.empty()) {
      try {
        ParseExperiment(record.experiment);
      } catch (const ConfigError&) {
        errors.push_back(where + ": unknown experiment '" + record.experiment + "'");
        continue;
      }
    }
    try {
      record.value = ParseDouble(row[c_value], where);
    } catch (const ParseError& e) {
      errors.push_back(e.what());
      continue;
    }
    // Failed assessments are recorded as non-finite values; they never join.
    if (!std::isfinite(record.value)) continue;
    records.push_back(std::move(record));
  }
  if (!errors.empty()) {
    throw ValidationError("invalid objective table: " + JoinErrors(errors));
  }
  return records;
}

std::vector<ObjectiveRecord> IngestObjective(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return IngestObjective(in);
}

std::vector<SubjectiveRecord> ExcludeAnchors(
    const std::vector<SubjectiveRecord>& records, const AnchorPolicy& policy) {
  std::vector<SubjectiveRecord> kept;
  for (const SubjectiveRecord& rec : records) {
    if (rec.condition == kLowpass3500 || rec.condition == kLowpass7000) continue;
    if (policy.drop_mono_anchor && rec.condition == kMonoAnchor) continue;
    kept.push_back(rec);
  }
  return kept;
}

std::string_view GroupingName(Grouping grouping) {
  switch (grouping) {
    case Grouping::kPerExperiment:
      return "per_experiment";
    case Grouping::kPerItem:
      return "per_item";
    case Grouping::kHardpanSplit:
      return "hardpan_split";
  }
  return "per_experiment";
}

Grouping ParseGrouping(std::string_view name) {
  for (Grouping g : {Grouping::kPerExperiment, Grouping::kPerItem,
                     Grouping::kHardpanSplit}) {
    if (name == GroupingName(g)) return g;
  }
  throw ConfigError("unknown grouping '" + std::string(name) + "'");
}

namespace {

using TrialKey = std::tuple<std::string, std::string, std::string>;

struct Point {
  std::string item;
  Experiment experiment;
  std::string condition;
  double subjective;
};

// Objective values per (item, experiment, condition), metric -> value. The
// experiment is empty for tables without an experiment column.
using ObjectiveIndex = std::map<TrialKey, std::map<std::string, double>>;

ObjectiveIndex IndexObjective(const std::vector<ObjectiveRecord>& objective) {
  ObjectiveIndex index;
  for (const ObjectiveRecord& rec : objective) {
    index[{rec.item, rec.experiment, rec.condition}][rec.metric] = rec.value;
  }
  return index;
}

const std::map<std::string, double>* Lookup(const ObjectiveIndex& index,
                                            const Point& p) {
  auto it = index.find({p.item, std::string(ExperimentName(p.experiment)), p.condition});
  if (it == index.end()) it = index.find({p.item, std::string(), p.condition});
  return it == index.end() ? nullptr : &it->second;
}

std::vector<Point> SubjectivePoints(const std::vector<SubjectiveRecord>& records,
                                    bool per_listener) {
  std::vector<Point> points;
  if (per_listener) {
    for (const SubjectiveRecord& rec : records) {
      points.push_back({rec.item, rec.experiment, rec.condition, rec.score});
    }
    return points;
  }
  std::map<std::tuple<std::string, Experiment, std::string>, std::pair<double, std::size_t>>
      sums;
  for (const SubjectiveRecord& rec : records) {
    auto& [sum, count] = sums[{rec.item, rec.experiment, rec.condition}];
    sum += rec.score;
    ++count;
  }
  for (const auto& [key, acc] : sums) {
    points.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key),
                      acc.first / static_cast<double>(acc.second)});
  }
  return points;
}

bool IsHardPanned(const std::string& item, const std::vector<ItemMetadata>& items) {
  for (const ItemMetadata& meta : items) {
    if (meta.item == item) return meta.hard_panned;
  }
  for (const ItemMetadata& meta : StandardItems()) {
    if (meta.item == item) return meta.hard_panned;
  }
  return false;
}

std::string GroupKey(const Point& p, Grouping grouping,
                     const std::vector<ItemMetadata>& items) {
  switch (grouping) {
    case Grouping::kPerExperiment:
      return std::string(ExperimentName(p.experiment));
    case Grouping::kPerItem:
      return p.item;
    case Grouping::kHardpanSplit:
      return IsHardPanned(p.item, items) ? "hard_panned" : "not_hard_panned";
  }
  return {};
}

struct Series {
  std::vector<double> objective;
  std::vector<double> subjective;
};

}  // namespace

std::size_t CountJoinedPoints(const std::vector<SubjectiveRecord>& subjective,
                              const std::vector<ObjectiveRecord>& objective,
                              const AnchorPolicy& anchors) {
  const ObjectiveIndex index = IndexObjective(objective);
  std::size_t count = 0;
  for (const Point& p : SubjectivePoints(ExcludeAnchors(subjective, anchors), false)) {
    if (Lookup(index, p)) ++count;
  }
  return count;
}

CorrelationReport GroupReport(const std::vector<SubjectiveRecord>& subjective,
                              const std::vector<ObjectiveRecord>& objective,
                              Grouping grouping,
                              const std::vector<ItemMetadata>& items,
                              const ReportOptions& options) {
  CorrelationReport report;
  report.grouping = grouping;
  const ObjectiveIndex index = IndexObjective(objective);
  const std::vector<Point> points =
      SubjectivePoints(ExcludeAnchors(subjective, options.anchors), options.per_listener);

  // metric -> group -> series
  std::map<std::string, std::map<std::string, Series>> data;
  for (const Point& p : points) {
    const auto* values = Lookup(index, p);
    if (!values) continue;
    const std::string key = GroupKey(p, grouping, items);
    for (const auto& [metric, value] : *values) {
      Series& s = data[metric][key];
      s.objective.push_back(value);
      s.subjective.push_back(p.subjective);
    }
  }

  for (const auto& [metric, groups] : data) {
    std::optional<CubicMapping> global;
    if (options.global_mapping) {
      Series all;
      for (const auto& [key, s] : groups) {
        all.objective.insert(all.objective.end(), s.objective.begin(), s.objective.end());
        all.subjective.insert(all.subjective.end(), s.subjective.begin(),
                              s.subjective.end());
      }
      try {
        global = FitThirdOrderMapping(all.objective, all.subjective, options.mapping);
      } catch (const DegenerateInputError& e) {
        report.warnings.push_back(metric + ": global mapping failed (" + e.what() +
                                  "); metric skipped");
        continue;
      }
    }
    std::vector<double> rs;
    for (const auto& [key, s] : groups) {
      const std::size_t n = s.objective.size();
      if (n < options.min_group_points) {
        report.warnings.push_back(metric + "/" + key + ": only " + std::to_string(n) +
                                  " joined points; group skipped");
        continue;
      }
      try {
        const CubicMapping mapping =
            global ? *global
                   : FitThirdOrderMapping(s.objective, s.subjective, options.mapping);
        std::vector<double> mapped(n);
        for (std::size_t i = 0; i < n; ++i) mapped[i] = mapping(s.objective[i]);
        const double r = Pearson(mapped, s.subjective);
        const ConfidenceInterval ci = Ci95(r, n);
        report.groups.push_back({key, metric, r, n, ci.upper, ci.lower});
        rs.push_back(r);
      } catch (const DegenerateInputError& e) {
        report.warnings.push_back(metric + "/" + key + ": " + e.what() +
                                  "; group skipped");
      }
    }
    if (!rs.empty()) report.pooled[metric] = PoolFisher(rs);
  }
  return report;
}

namespace {

std::size_t PooledCount(const CorrelationReport& report, const std::string& metric) {
  std::size_t n = 0;
  for (const CorrelationGroup& g : report.groups) {
    if (g.metric == metric) n += g.n;
  }
  return n;
}

}  // namespace

void WriteReportCsv(const std::vector<CorrelationReport>& reports, std::ostream& out) {
  WriteCsvRow(out, {"grouping", "group", "metric", "r", "n", "ci95_hi", "ci95_lo"});
  for (const CorrelationReport& report : reports) {
    const std::string grouping(GroupingName(report.grouping));
    for (const CorrelationGroup& g : report.groups) {
      WriteCsvRow(out, {grouping, g.key, g.metric, FormatDouble(g.r), std::to_string(g.n),
                        FormatDouble(g.ci95_hi), FormatDouble(g.ci95_lo)});
    }
    for (const auto& [metric, r] : report.pooled) {
      WriteCsvRow(out, {grouping, "pooled", metric, FormatDouble(r),
                        std::to_string(PooledCount(report, metric)), "", ""});
    }
  }
}

std::string ReportJson(const std::vector<CorrelationReport>& reports) {
  nlohmann::ordered_json root;
  root["reports"] = nlohmann::ordered_json::array();
  for (const CorrelationReport& report : reports) {
    nlohmann::ordered_json entry;
    entry["grouping"] = std::string(GroupingName(report.grouping));
    entry["groups"] = nlohmann::ordered_json::array();
    for (const CorrelationGroup& g : report.groups) {
      entry["groups"].push_back({{"group", g.key},
                                 {"metric", g.metric},
                                 {"r", g.r},
                                 {"n", g.n},
                                 {"ci95_hi", g.ci95_hi},
                                 {"ci95_lo", g.ci95_lo}});
    }
    entry["pooled"] = nlohmann::ordered_json::object();
    for (const auto& [metric, r] : report.pooled) {
      entry["pooled"][metric] = {{"r", r}, {"n", PooledCount(report, metric)}};
    }
    entry["warnings"] = report.warnings;
    root["reports"].push_back(std::move(entry));
  }
  return root.dump(2) + "\n";
}

}  // namespace stereoqa
