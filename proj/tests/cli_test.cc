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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "config.h"
#include "stereoqa/csv.h"
#include "stereoqa/error.h"

namespace fs = std::filesystem;

namespace stereoqa::tools {
namespace {

TEST(ConfigTest, Defaults) {
  const RunConfig c = ParseConfig("{}", "/base");
  EXPECT_EQ(c.experiments.size(), 4u);
  EXPECT_EQ(c.groupings.size(), 3u);
  EXPECT_DOUBLE_EQ(c.calibration.nmr_spl_db, 92.0);
  EXPECT_DOUBLE_EQ(c.calibration.binaural_spl_db, 65.0);
  EXPECT_EQ(c.stft.window_length, 2048u);
  EXPECT_EQ(c.stft.hop, 1024u);
  EXPECT_EQ(c.output_dir, fs::path("/base/out"));
  EXPECT_NO_THROW(ParseConfig(DefaultConfigJson(), "/base"));
}

TEST(ConfigTest, Overrides) {
  const RunConfig c = ParseConfig(
      R"({"seed": 7, "experiments": ["QNmix"], "quality.Q3.qn_target_nmr_db": 4.5,
          "binaural.frame_ms": 40, "fusion.binaural_scale": 0.01})",
      "/base");
  EXPECT_EQ(c.seed, 7u);
  ASSERT_EQ(c.experiments.size(), 1u);
  EXPECT_EQ(c.experiments[0], Experiment::kQNmix);
  EXPECT_DOUBLE_EQ(c.conditions.degrade.table.at(QualityLevel::kQ3).qn_target_nmr_db, 4.5);
  EXPECT_DOUBLE_EQ(c.cues.frame_ms, 40.0);
  EXPECT_DOUBLE_EQ(c.min_rule.binaural, 0.01);
}

TEST(ConfigTest, RejectsUnknownOrMistyped) {
  EXPECT_THROW(ParseConfig(R"({"sede": 1})", "."), ConfigError);
  EXPECT_THROW(ParseConfig(R"({"seed": "one"})", "."), ConfigError);
  EXPECT_THROW(ParseConfig(R"({"experiments": ["QNXX"]})", "."), ConfigError);
  EXPECT_THROW(ParseConfig(R"({"fusion.monaural_scale": 0})", "."), ConfigError);
  EXPECT_THROW(ParseConfig("[1,2]", "."), ConfigError);
  EXPECT_THROW(ParseConfig("{", "."), ConfigError);
}

TEST(ConfigTest, ExperimentAndGroupingLists) {
  EXPECT_EQ(ParseExperimentList("QNLR,SHmix").size(), 2u);
  EXPECT_THROW(ParseExperimentList("QNLR,bogus"), ConfigError);
  EXPECT_EQ(ParseGroupingList("per_item").size(), 1u);
  EXPECT_THROW(ParseGroupingList("per_song"), ConfigError);
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("stereoqa_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

TEST(ManifestTest, Parsing) {
  const fs::path dir = TempDir("manifest");
  WriteText(dir / "ok.csv", "item,path,hard_panned,description\nA,a.wav,true,x\nB,b.wav,false,\n");
  const auto entries = LoadManifest(dir / "ok.csv");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_TRUE(entries[0].hard_panned);
  EXPECT_EQ(entries[1].path, dir / "b.wav");
  EXPECT_EQ(ToItemMetadata(entries).size(), 2u);
  WriteText(dir / "dup.csv", "item,path,hard_panned,description\nA,a.wav,true,x\nA,b.wav,false,\n");
  EXPECT_THROW(LoadManifest(dir / "dup.csv"), ConfigError);
  WriteText(dir / "sep.csv", "item,path,hard_panned,description\nA__B,a.wav,true,x\n");
  EXPECT_THROW(LoadManifest(dir / "sep.csv"), ConfigError);
}

int RunCli(const std::string& args) {
  const std::string cmd = std::string(STEREOQA_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// One small QNLR run on the shipped fixtures, shared by the pipeline tests.
class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    out_ = new fs::path(TempDir("pipeline"));
    config_ = new std::string(std::string(STEREOQA_FIXTURES) + "/config.json");
    const std::string common = " --config " + *config_ + " --out " + out_->string();
    degrade_status_ = RunCli("degrade" + common + " --experiments QNLR");
    assess_status_ = RunCli("assess" + common);
    evaluate_status_ = RunCli("evaluate" + common);
  }
  static void TearDownTestSuite() {
    fs::remove_all(*out_);
    delete out_;
    delete config_;
  }

  static CsvTable Objective() { return ReadCsvFile(*out_ / "objective.csv"); }

  static fs::path* out_;
  static std::string* config_;
  static int degrade_status_, assess_status_, evaluate_status_;
};

fs::path* PipelineTest::out_ = nullptr;
std::string* PipelineTest::config_ = nullptr;
int PipelineTest::degrade_status_ = -1;
int PipelineTest::assess_status_ = -1;
int PipelineTest::evaluate_status_ = -1;

TEST_F(PipelineTest, ExitCodes) {
  EXPECT_EQ(degrade_status_, 0);
  EXPECT_EQ(assess_status_, 0);
  EXPECT_EQ(evaluate_status_, 0);
}

TEST_F(PipelineTest, IndexEntriesExist) {
  const CsvTable index = ReadCsvFile(*out_ / "index.csv");
  EXPECT_EQ(index.header, (std::vector<std::string>{"item", "experiment", "condition", "path",
                                                    "sidecar", "reference"}));
  EXPECT_EQ(index.rows.size(), 2u * 8u);
  for (const auto& row : index.rows) {
    EXPECT_TRUE(fs::exists(*out_ / row[3])) << row[3];
    EXPECT_TRUE(fs::exists(*out_ / row[4])) << row[4];
    EXPECT_EQ(row[1], "QNLR");
  }
}

TEST_F(PipelineTest, HiddenReferenceIsTransparent) {
  const CsvTable table = Objective();
  std::map<std::string, double> hr;
  for (const auto& row : table.rows) {
    if (row[0] == "Violin" && row[2] == "hidden_reference") hr[row[3]] = ParseDouble(row[4], "value");
  }
  ASSERT_EQ(hr.size(), 9u);
  EXPECT_DOUBLE_EQ(hr["nmr_db"], -100.0);
  EXPECT_NEAR(hr["timbre_average"], 1.0, 1e-12);
  EXPECT_NEAR(hr["d_ild_db"], 0.0, 1e-12);
  EXPECT_NEAR(hr["d_itd_us"], 0.0, 1e-12);
  EXPECT_NEAR(hr["d_iacc"], 0.0, 1e-12);
}

TEST_F(PipelineTest, ReportHasEveryGrouping) {
  std::ifstream in(*out_ / "report.json");
  const auto json = nlohmann::json::parse(in);
  ASSERT_EQ(json["reports"].size(), 3u);
  EXPECT_EQ(json["reports"][0]["grouping"], "per_experiment");
  EXPECT_FALSE(json["reports"][0]["groups"].empty());
  const CsvTable csv = ReadCsvFile(*out_ / "report.csv");
  EXPECT_FALSE(csv.rows.empty());
}

TEST_F(PipelineTest, MissingConditionFileGivesErrorRow) {
  const fs::path copy = TempDir("missing");
  fs::copy(*out_, copy, fs::copy_options::recursive);
  const CsvTable index = ReadCsvFile(copy / "index.csv");
  fs::remove(copy / index.rows[1][3]);
  EXPECT_EQ(RunCli("assess --config " + *config_ + " --out " + copy.string()), 0);
  const CsvTable table = ReadCsvFile(copy / "objective.csv");
  std::size_t errors = 0;
  for (const auto& row : table.rows) {
    if (row[3] == "error") {
      ++errors;
      EXPECT_EQ(row[2], index.rows[1][2]);
      EXPECT_TRUE(std::isnan(ParseDouble(row[4], "value")));
    }
  }
  EXPECT_EQ(errors, 1u);
  fs::remove_all(copy);
}

TEST(CliTest, UsageErrors) {
  const std::string config = std::string(STEREOQA_FIXTURES) + "/config.json";
  const fs::path out = TempDir("usage");
  EXPECT_EQ(RunCli("degrade --config " + config + " --out " + out.string() + " --experiments QNXX"), 2);
  EXPECT_EQ(RunCli("frobnicate"), 2);
  EXPECT_EQ(RunCli("degrade --config " + (out / "missing.json").string()), 2);
  EXPECT_EQ(RunCli("default-config"), 0);
  fs::remove_all(out);
}

}  // namespace
}  // namespace stereoqa::tools
