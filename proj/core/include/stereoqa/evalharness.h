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

#ifndef STEREOQA_EVALHARNESS_H_
#define STEREOQA_EVALHARNESS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stereoqa/degrade.h"
#include "stereoqa/stats.h"

namespace stereoqa {

struct SubjectiveRecord {
  std::string item;
  Experiment experiment = Experiment::kQNLR;
  std::string condition;
  std::string listener_id;
  double score = 0.0;  // MUSHRA, [0, 100]
};

struct ObjectiveRecord {
  std::string item;
  // Empty when the objective table has no experiment column; the record then
  // applies to the condition in every experiment.
  std::string experiment;
  std::string condition;
  std::string metric;
  double value = 0.0;
};

struct ItemMetadata {
  std::string item;
  bool hard_panned = false;
  std::string description;
};

// The six excerpts of the stereo listening test (Violin, Glock, RnB, Pop,
// panDialogF, panDialogM); only the two dialog items are hard panned.
const std::vector<ItemMetadata>& StandardItems();

struct IngestResult {
  std::vector<SubjectiveRecord> records;
  std::vector<std::string> warnings;
};

// Reads `item,experiment,condition,listener_id,score`. Rows with an
// out-of-range score, unknown experiment or missing field are collected and
// reported together in one ValidationError naming their line numbers. Trials
// (item, experiment) without a hidden_reference condition produce warnings.
IngestResult IngestScores(const std::filesystem::path& path);
IngestResult IngestScores(std::istream& in);

// Reads `item,[experiment,]condition,metric,value`.
std::vector<ObjectiveRecord> IngestObjective(const std::filesystem::path& path);
std::vector<ObjectiveRecord> IngestObjective(std::istream& in);

struct AnchorPolicy {
  bool drop_mono_anchor = false;
};

// Removes the lp3500 and lp7000 conditions (and the mono anchor if asked).
std::vector<SubjectiveRecord> ExcludeAnchors(
    const std::vector<SubjectiveRecord>& records,
    const AnchorPolicy& policy = {});

enum class Grouping { kPerExperiment, kPerItem, kHardpanSplit };

std::string_view GroupingName(Grouping grouping);
// Throws ConfigError for an unknown name.
Grouping ParseGrouping(std::string_view name);

struct CorrelationGroup {
  std::string key;
  std::string metric;
  double r = 0.0;
  std::size_t n = 0;
  double ci95_hi = 0.0;
  double ci95_lo = 0.0;
};

struct CorrelationReport {
  Grouping grouping = Grouping::kPerExperiment;
  std::vector<CorrelationGroup> groups;
  // Fisher-z pooled correlation per metric over that metric's groups.
  std::map<std::string, double> pooled;
  std::vector<std::string> warnings;
};

struct ReportOptions {
  AnchorPolicy anchors;
  // Correlate every listener's score instead of the per-condition mean.
  bool per_listener = false;
  // Fit one cubic mapping per metric over all points instead of per group.
  bool global_mapping = false;
  CubicFitOptions mapping;
  std::size_t min_group_points = 5;
};

// Anchors are excluded, subjective scores are averaged over listeners and
// joined to the objective values on (item, experiment, condition). Within
// each group a third-order mapping is fitted before the Pearson correlation;
// groups with fewer than min_group_points points are skipped with a warning.
// Items missing from `items` are looked up in StandardItems() for the
// hard-pan split and count as not hard panned otherwise.
CorrelationReport GroupReport(const std::vector<SubjectiveRecord>& subjective,
                              const std::vector<ObjectiveRecord>& objective,
                              Grouping grouping,
                              const std::vector<ItemMetadata>& items = {},
                              const ReportOptions& options = {});

// Number of (item, experiment, condition) points that join between the two
// tables after anchor exclusion.
std::size_t CountJoinedPoints(const std::vector<SubjectiveRecord>& subjective,
                              const std::vector<ObjectiveRecord>& objective,
                              const AnchorPolicy& anchors = {});

// CSV columns grouping,group,metric,r,n,ci95_hi,ci95_lo. Pooled rows use the
// group name "pooled", the summed n and empty interval fields.
void WriteReportCsv(const std::vector<CorrelationReport>& reports,
                    std::ostream& out);
std::string ReportJson(const std::vector<CorrelationReport>& reports);

}  // namespace stereoqa

#endif  // STEREOQA_EVALHARNESS_H_
