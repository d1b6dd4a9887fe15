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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.h"
#include "config.h"
#include "fixtures.h"
#include "stereoqa/error.h"
#include "stereoqa/log.h"

namespace {

namespace fs = std::filesystem;
using stereoqa::ConfigError;
using stereoqa::tools::CommandSummary;
using stereoqa::tools::RunConfig;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

void AddCommon(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "JSON run configuration");
  cmd->add_option("--out", flags.out, "Output directory (overrides output_dir)");
  cmd->add_option("--seed", flags.seed, "Base seed (overrides seed)");
}

RunConfig Resolve(const CommonFlags& flags) {
  RunConfig config;
  if (!flags.config.empty()) {
    if (!fs::exists(flags.config)) throw ConfigError("config not found: " + flags.config);
    config = stereoqa::tools::LoadConfig(flags.config);
  }
  if (!flags.out.empty()) config.output_dir = flags.out;
  if (flags.seed) {
    config.seed = *flags.seed;
    config.conditions.base_seed = *flags.seed;
  }
  return config;
}

void RequireFile(const fs::path& path, const std::string& what) {
  if (path.empty()) throw ConfigError(what + " is not set");
  if (!fs::exists(path)) throw ConfigError(what + " not found: " + path.string());
}

int Report(const std::string& command, const CommandSummary& summary, std::size_t warnings) {
  for (const std::string& e : summary.errors) std::cerr << "error: " << e << "\n";
  std::cerr << command << ": " << summary.outputs << " outputs, " << summary.errors.size()
            << " errors, " << warnings << " warnings\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stereo audio quality degradation, assessment and evaluation"};
  app.require_subcommand(1);

  CommonFlags degrade_flags, assess_flags, evaluate_flags, cues_flags;
  std::string experiments, grouping, index, objective, scores;
  std::string fixtures_out, train, model, wav, cues_out;
  std::uint64_t fixtures_seed = 20240917;
  std::size_t max_terms = 10;
  int max_degree = 1;

  CLI::App* degrade = app.add_subcommand("degrade", "Generate degraded conditions");
  AddCommon(degrade, degrade_flags);
  degrade->add_option("--experiments", experiments, "Comma-separated experiment list");

  CLI::App* assess = app.add_subcommand("assess", "Compute objective metrics");
  AddCommon(assess, assess_flags);
  assess->add_option("--index", index, "Condition index (default <out>/index.csv)");
  assess->add_option("--objective", objective, "Output CSV (default <out>/objective.csv)");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Correlate metrics with scores");
  AddCommon(evaluate, evaluate_flags);
  evaluate->add_option("--grouping", grouping, "Comma-separated grouping list");
  evaluate->add_option("--objective", objective, "Objective CSV (default <out>/objective.csv)");
  evaluate->add_option("--scores", scores, "Subjective CSV (default subjective_scores)");

  CLI::App* fixtures = app.add_subcommand("make-fixtures", "Write the synthetic fixture set");
  fixtures->add_option("--out", fixtures_out, "Destination directory")->required();
  fixtures->add_option("--seed", fixtures_seed, "Fixture seed");

  CLI::App* fit = app.add_subcommand("fit-regression", "Fit a hinge regression model");
  fit->add_option("--train", train, "Training CSV with a target column")->required();
  fit->add_option("--model", model, "Output model file")->required();
  fit->add_option("--max-terms", max_terms, "Maximum number of basis terms");
  fit->add_option("--max-degree", max_degree, "Maximum interaction degree (1 or 2)");

  CLI::App* cues = app.add_subcommand("export-cues", "Write binaural cues of a stereo file");
  AddCommon(cues, cues_flags);
  cues->add_option("--wav", wav, "Stereo WAV file")->required();
  cues->add_option("--csv", cues_out, "Output CSV")->required();

  app.add_subcommand("default-config", "Print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::size_t warnings = 0;
  stereoqa::SetWarningSink([&warnings](const std::string& message) {
    ++warnings;
    std::cerr << "warning: " << message << "\n";
  });

  try {
    if (*degrade) {
      RunConfig config = Resolve(degrade_flags);
      if (!experiments.empty()) {
        config.experiments = stereoqa::tools::ParseExperimentList(experiments);
      }
      RequireFile(config.items_manifest, "items_manifest");
      return Report("degrade", stereoqa::tools::RunDegrade(config), warnings);
    }
    if (*assess) {
      const RunConfig config = Resolve(assess_flags);
      const fs::path index_path = index.empty() ? config.output_dir / "index.csv" : fs::path(index);
      RequireFile(index_path, "index");
      const fs::path out_path =
          objective.empty() ? config.output_dir / "objective.csv" : fs::path(objective);
      return Report("assess", stereoqa::tools::RunAssess(config, index_path, out_path), warnings);
    }
    if (*evaluate) {
      RunConfig config = Resolve(evaluate_flags);
      if (!grouping.empty()) config.groupings = stereoqa::tools::ParseGroupingList(grouping);
      const fs::path objective_path =
          objective.empty() ? config.output_dir / "objective.csv" : fs::path(objective);
      const fs::path scores_path = scores.empty() ? config.subjective_scores : fs::path(scores);
      RequireFile(objective_path, "objective CSV");
      RequireFile(scores_path, "subjective scores");
      return Report("evaluate",
                    stereoqa::tools::RunEvaluate(config, objective_path, scores_path), warnings);
    }
    if (*fixtures) {
      stereoqa::tools::WriteFixtureSet(fixtures_out, fixtures_seed);
      return 0;
    }
    if (*fit) {
      RequireFile(train, "training CSV");
      return Report("fit-regression",
                    stereoqa::tools::RunFitRegression(train, model, max_terms, max_degree),
                    warnings);
    }
    if (*cues) {
      const RunConfig config = Resolve(cues_flags);
      RequireFile(wav, "wav");
      return Report("export-cues", stereoqa::tools::RunExportCues(config, wav, cues_out),
                    warnings);
    }
    std::cout << stereoqa::tools::DefaultConfigJson();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
