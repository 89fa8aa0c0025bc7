/*
 * Copyright 2026 The plateaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <filesystem>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.h"
#include "plateaudit/core/digest.h"
#include "plateaudit/core/io.h"
#include "plateaudit/core/manifest.h"
#include "plateaudit/features/table.h"
#include "testing/fixtures.h"

namespace plateaudit::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "plateaudit");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Result r;
  r.code = Run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

constexpr const char* kSmallConfig =
    R"({"batches": 2, "plates_per_batch": 1, "sites_per_well": 1})";
constexpr const char* kShiftedConfig =
    R"({"batches": 2, "plates_per_batch": 1, "sites_per_well": 1,
        "nuisance": {"batch_shift": {"enabled": true, "std": 0.2}}})";

// Simulates and featurizes two small experiments once for the suite.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = std::make_unique<testing::TempDir>();
    WriteFile(Path("small.json"), kSmallConfig);
    WriteFile(Path("shifted.json"), kShiftedConfig);
    for (const std::string name : {"null", "shifted"}) {
      const std::string config = name == "null" ? "small.json" : "shifted.json";
      ASSERT_EQ(RunCli({"--threads", "4", "simulate", "--config", Path(config), "--out",
                        Path(name), "--seed", "3"})
                    .code,
                0);
      ASSERT_EQ(RunCli({"--threads", "4", "featurize", "--manifest",
                        Path(name + "/manifest.jsonl"), "--out", Path(name + ".csv")})
                    .code,
                0);
    }
  }
  static void TearDownTestSuite() { dir_.reset(); }

  static std::string Path(const std::string& name) { return (*dir_ / name).string(); }

  static std::unique_ptr<testing::TempDir> dir_;
};

std::unique_ptr<testing::TempDir> CliTest::dir_;

TEST_F(CliTest, SimulateWritesArtifactsAndIsIdempotent) {
  EXPECT_TRUE(fs::exists(Path("null/manifest.jsonl")));
  EXPECT_TRUE(fs::exists(Path("null/groundtruth.json")));
  EXPECT_TRUE(fs::exists(Path("null/pairs.json")));
  const Result again = RunCli({"simulate", "--config", Path("small.json"), "--out",
                               Path("null_again"), "--seed", "3"});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_NE(again.out.find("192 sites"), std::string::npos);
  for (const std::string f : {"manifest.jsonl", "groundtruth.json", "images/b0/p0/rA01_s0.ptns"}) {
    if (!fs::exists(Path("null/" + f))) continue;
    EXPECT_EQ(DigestOf(ReadFile(Path("null/" + f))), DigestOf(ReadFile(Path("null_again/" + f))))
        << f;
  }
  const ExperimentManifest m = LoadManifest(Path("null/manifest.jsonl"));
  EXPECT_EQ(DigestOf(ReadFile(Path("null/" + m.sites[5].image_path))),
            DigestOf(ReadFile(Path("null_again/" + m.sites[5].image_path))));
}

TEST_F(CliTest, SimulateConfigErrors) {
  EXPECT_EQ(RunCli({"simulate", "--config", Path("absent.json"), "--out", Path("x")}).code, 2);
  WriteFile(Path("bad.json"), R"({"batchez": 2})");
  const Result bad = RunCli({"simulate", "--config", Path("bad.json"), "--out", Path("x")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("batchez"), std::string::npos);
  EXPECT_EQ(RunCli({"simulate"}).code, 2);
}

TEST_F(CliTest, FeaturizeRowsAndIdempotence) {
  const features::FeatureTable table = features::LoadFeatureTable(Path("null.csv"));
  EXPECT_EQ(table.size(), 192);
  EXPECT_EQ(table.width(), 63);
  ASSERT_EQ(RunCli({"featurize", "--manifest", Path("null/manifest.jsonl"), "--out",
                    Path("null_again.csv")})
                .code,
            0);
  EXPECT_EQ(ReadFile(Path("null.csv")), ReadFile(Path("null_again.csv")));
}

TEST_F(CliTest, PatchRowsEqualDetections) {
  const Result r = RunCli({"--threads", "3", "featurize", "--manifest", Path("null/manifest.jsonl"),
                           "--out", Path("patches.csv"), "--unit", "patch", "--detections",
                           Path("detections.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string detections = ReadFile(Path("detections.csv"));
  const auto detection_rows = std::count(detections.begin(), detections.end(), '\n') - 1;
  EXPECT_EQ(features::LoadFeatureTable(Path("patches.csv")).size(), detection_rows);
  EXPECT_GT(detection_rows, 192);
}

TEST_F(CliTest, CorruptImageNamesTheFile) {
  testing::TempDir local;
  ASSERT_EQ(RunCli({"simulate", "--config", Path("small.json"), "--out", (local / "exp").string()})
                .code,
            0);
  const ExperimentManifest m = LoadManifest(local / "exp/manifest.jsonl");
  const fs::path victim = local / "exp" / m.sites[7].image_path;
  WriteFile(victim, "garbage");
  const Result r = RunCli({"featurize", "--manifest", (local / "exp/manifest.jsonl").string(),
                           "--out", (local / "f.csv").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(victim.filename().string()), std::string::npos) << r.err;
}

TEST_F(CliTest, ProjectRejectsPerplexityAboveRange) {
  features::FeatureTable table = features::LoadFeatureTable(Path("null.csv"));
  table.rows.resize(10);
  features::SaveFeatureTable(Path("ten.csv"), table);
  const Result r = RunCli({"project", "--features", Path("ten.csv"), "--perplexity", "30",
                           "--out", Path("ten_coords.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("perplexity"), std::string::npos);
}

TEST_F(CliTest, ProjectIsDeterministic) {
  const std::vector<std::string> args = {"project", "--features", Path("shifted.csv"),
                                         "--iterations", "300", "--seed", "4", "--out"};
  auto a = args, b = args;
  a.push_back(Path("c1.csv"));
  b.push_back(Path("c2.csv"));
  const Result ra = RunCli(a);
  ASSERT_EQ(ra.code, 0) << ra.err;
  ASSERT_EQ(RunCli(b).code, 0);
  EXPECT_EQ(ReadFile(Path("c1.csv")), ReadFile(Path("c2.csv")));
  EXPECT_TRUE(fs::exists(Path("c1.svg")));
  EXPECT_NE(ra.out.find("purity[batch]="), std::string::npos);
}

TEST_F(CliTest, NuisanceExitCodes) {
  // 96 control sites leave 8 per plate column, below the 10-row minimum.
  const Result too_few = RunCli({"audit", "nuisance", "--features", Path("null.csv"), "--out",
                                 Path("too_few.json")});
  EXPECT_EQ(too_few.code, 2);
  EXPECT_NE(too_few.err.find("column"), std::string::npos);
  const Result clean = RunCli({"audit", "nuisance", "--features", Path("null.csv"), "--manifest",
                               Path("null/manifest.jsonl"), "--factors", "batch,row", "--out",
                               Path("null_report.json")});
  EXPECT_EQ(clean.code, 0) << clean.out << clean.err;
  const Result biased = RunCli({"audit", "nuisance", "--features", Path("shifted.csv"),
                                "--factors", "batch,row", "--out", Path("shifted_report.json")});
  EXPECT_EQ(biased.code, 1) << biased.out << biased.err;
  EXPECT_NE(biased.out.find("factor batch"), std::string::npos);
  EXPECT_NE(ReadFile(Path("shifted_report.json")).find("\"bias_detected\": true"),
            std::string::npos);
}

TEST_F(CliTest, DiseaseInputErrors) {
  WriteFile(Path("bad_pairs.json"), R"([{"healthy": "H1"}])");
  EXPECT_EQ(RunCli({"audit", "disease", "--features", Path("null.csv"), "--pairs",
                    Path("bad_pairs.json"), "--out", Path("d.json")})
                .code,
            2);
  WriteFile(Path("unknown_pairs.json"), R"([{"healthy": "H1", "disease": "D99"}])");
  EXPECT_EQ(RunCli({"audit", "disease", "--features", Path("null.csv"), "--pairs",
                    Path("unknown_pairs.json"), "--out", Path("d.json")})
                .code,
            2);
  EXPECT_EQ(RunCli({"audit", "disease", "--features", Path("null.csv"), "--out", Path("d.json")})
                .code,
            2);
  EXPECT_EQ(RunCli({"audit", "disease", "--features", Path("null.csv"), "--folds", "batch",
                    "--out", Path("d.json")})
                .code,
            0);
  EXPECT_EQ(RunCli({"audit", "sideways", "--features", Path("null.csv"), "--out", Path("d.json")})
                .code,
            2);
}

TEST_F(CliTest, ReportRenderingAndSchemaMismatch) {
  ASSERT_EQ(RunCli({"audit", "density", "--features", Path("null.csv"), "--pairs",
                    Path("null/pairs.json"), "--artifact", "plate.svg", "--out",
                    Path("density.json")})
                .code,
            0);
  ASSERT_EQ(RunCli({"report", "--in", Path("density.json"), "--out", Path("r1.md")}).code, 0);
  ASSERT_EQ(RunCli({"report", "--in", Path("density.json"), "--out", Path("r2.md")}).code, 0);
  const std::string md = ReadFile(Path("r1.md"));
  EXPECT_EQ(md, ReadFile(Path("r2.md")));
  EXPECT_NE(md.find("(plate.svg)"), std::string::npos);
  std::string json = ReadFile(Path("density.json"));
  json.replace(json.find("\"schema_version\": 1"), 19, "\"schema_version\": 9");
  WriteFile(Path("v9.json"), json);
  const Result r = RunCli({"report", "--in", Path("v9.json"), "--out", Path("r3.md")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("schema"), std::string::npos);
}

TEST_F(CliTest, FocusMapNeedsExactlyOneModelSource) {
  EXPECT_EQ(RunCli({"focus-map", "--manifest", Path("null/manifest.jsonl"), "--out",
                    Path("focus.svg")})
                .code,
            2);
  EXPECT_EQ(RunCli({"focus-map", "--manifest", Path("null/manifest.jsonl"), "--model",
                    Path("missing_model.json"), "--out", Path("focus.svg")})
                .code,
            2);
}

TEST_F(CliTest, HelpVersionAndEmitConfig) {
  EXPECT_EQ(RunCli({"--help"}).code, 0);
  EXPECT_EQ(RunCli({"--version"}).code, 0);
  EXPECT_EQ(RunCli({}).code, 2);
  EXPECT_EQ(RunCli({"frobnicate"}).code, 2);
  EXPECT_EQ(RunCli({"--threads", "0", "report", "--in", Path("null_report.json"), "--out",
                    Path("x.md")})
                .code,
            2);
  const Result emit = RunCli({"--emit-config", "simulate", "--config", Path("small.json"),
                              "--out", Path("emit")});
  ASSERT_EQ(emit.code, 0);
  EXPECT_NE(emit.out.find("\"plates_per_batch\""), std::string::npos);
}

}  // namespace
}  // namespace plateaudit::cli
