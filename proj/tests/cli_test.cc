/*
 * Copyright 2026 The gmvx Authors.
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

#include "gmvx/cli/commands.h"

#include <filesystem>
#include <map>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "gmvx/common/csv.h"
#include "gmvx/dataset/dataset.h"
#include "gmvx/dataset/synthetic.h"
#include "gmvx/explain/artifacts.h"
#include "gmvx/models/model_spec.h"
#include "gmvx/tuning/grid_search.h"
#include "testing/fixtures.h"

namespace gmvx::cli {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args,
        std::map<std::string, std::string> env = {}) {
  args.insert(args.begin(), "gmvx");
  std::ostringstream out;
  std::ostringstream err;
  EnvLookup lookup = [env](const std::string& name) -> std::optional<std::string> {
    const auto it = env.find(name);
    if (it == env.end()) return std::nullopt;
    return it->second;
  };
  const int code = RunCli(args, out, err, lookup);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> DirContents(const std::string& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    files[e.path().filename().string()] = ReadTextFile(e.path().string());
  }
  return files;
}

std::string FormatCsvLine(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + cells[i];
  return line + "\n";
}

std::string Path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// Small synthetic dataset shared by the explain tests.
const std::string& SmallData() {
  static const std::string path = [] {
    const std::string dir = testing::TempDir("cli_data");
    const CliRun r = Cli({"generate", "--rows", "240", "--seed", "3", "--out", dir});
    EXPECT_EQ(r.code, 0) << r.err;
    return Path(dir, "data.csv");
  }();
  return path;
}

std::vector<std::string> ExplainArgs(const std::string& out) {
  return {"explain", "--data", SmallData(), "--algorithm", "RF", "--params",
          R"({"n_estimators": 10})", "--permutations", "8", "--background", "20",
          "--explain-rows", "60", "--out", out};
}

TEST(CliExitCodes, VersionAndHelpSucceed) {
  EXPECT_EQ(Cli({"--version"}).code, 0);
  const CliRun help = Cli({"--help"});
  EXPECT_EQ(help.code, 0);
  for (const auto& name : CommandNames()) {
    EXPECT_NE(help.out.find(name), std::string::npos) << name;
  }
  EXPECT_EQ(Cli({"explain", "--help"}).code, 0);
}

TEST(CliExitCodes, UsageErrorsAreTwo) {
  EXPECT_EQ(Cli({}).code, 2);
  EXPECT_EQ(Cli({"generate", "--no-such-flag"}).code, 2);
  EXPECT_EQ(Cli({"generate", "--rows", "many"}).code, 2);
  // Options belong to specific subcommands.
  EXPECT_EQ(Cli({"generate", "--ale", "Comments"}).code, 2);
  EXPECT_EQ(Cli({"validate", "--data", "/nonexistent/data.csv"}).code, 2);
  EXPECT_EQ(Cli({"benchmark", "--data", SmallData(), "--metric", "r2"}).code, 2);
}

TEST(CliExitCodes, SolverFailureIsInternal) {
  const CliRun r = Cli({"train", "--data", SmallData(), "--algorithm", "SVR",
                     "--params", R"({"max_iter": 2})", "--out",
                     testing::TempDir("cli_svr")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("converge"), std::string::npos) << r.err;
}

TEST(CliGenerate, ZeroRowsIsArgumentError) {
  const CliRun r = Cli({"generate", "--rows", "0", "--out", testing::TempDir("cli_g0")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("rows"), std::string::npos);
}

TEST(CliGenerate, SameSeedIsByteIdentical) {
  const std::string a = testing::TempDir("cli_ga");
  const std::string b = testing::TempDir("cli_gb");
  ASSERT_EQ(Cli({"generate", "--rows", "200", "--seed", "9", "--out", a}).code, 0);
  ASSERT_EQ(Cli({"generate", "--rows", "200", "--seed", "9", "--out", b}).code, 0);
  EXPECT_EQ(DirContents(a), DirContents(b));
  const CsvTable t = ParseCsv(ReadTextFile(Path(a, "data.csv")));
  EXPECT_EQ(t.rows.size(), 200u);
  EXPECT_EQ(t.header.size(), 31u);
  const std::string c = testing::TempDir("cli_gc");
  ASSERT_EQ(Cli({"generate", "--rows", "200", "--seed", "10", "--out", c}).code, 0);
  EXPECT_NE(ReadTextFile(Path(a, "data.csv")), ReadTextFile(Path(c, "data.csv")));
}

TEST(CliGenerate, InfeasibleSpecFails) {
  nlohmann::json spec = dataset::SyntheticSpecToJson(dataset::SyntheticSpec::Default());
  spec["correlations"][0]["rho"] = 1.5;
  const std::string dir = testing::TempDir("cli_bad_spec");
  WriteTextFile(Path(dir, "spec.json"), spec.dump());
  const CliRun r = Cli({"generate", "--spec", Path(dir, "spec.json"), "--out", dir});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("calibration"), std::string::npos) << r.err;
}

TEST(CliValidate, StrictViolationExitsTwoWithReport) {
  CsvTable t = ParseCsv(ReadTextFile(SmallData()));
  std::size_t col = 0;
  while (t.header[col] != "Enthusiasm") ++col;
  t.rows[4][col] = "250";
  std::string text = FormatCsvLine(t.header);
  for (const auto& row : t.rows) text += FormatCsvLine(row);
  const std::string dir = testing::TempDir("cli_validate");
  WriteTextFile(Path(dir, "bad.csv"), text);

  const CliRun lax = Cli({"validate", "--data", Path(dir, "bad.csv")});
  EXPECT_EQ(lax.code, 0);
  EXPECT_NE(lax.out.find("Enthusiasm"), std::string::npos) << lax.out;
  const CliRun strict = Cli({"validate", "--data", Path(dir, "bad.csv"), "--strict"});
  EXPECT_EQ(strict.code, 2);
  EXPECT_NE(strict.err.find("Enthusiasm"), std::string::npos) << strict.err;
  const CliRun ok = Cli({"validate", "--data", SmallData(), "--strict"});
  EXPECT_EQ(ok.code, 0) << ok.err;
}

class CliBenchmark : public ::testing::Test {
 protected:
  static std::string Grids() {
    const std::string dir = testing::TempDir("cli_grids");
    tuning::GridSet grids;
    for (const auto& [alg, grid] : tuning::DefaultGrids()) {
      tuning::GridSpec one = grid;
      for (auto& [name, values] : one.values) values.resize(1);
      grids.emplace(alg, one);
    }
    WriteTextFile(Path(dir, "grids.json"), tuning::GridsToJson(grids).dump(2));
    return Path(dir, "grids.json");
  }
};

TEST_F(CliBenchmark, OneAlgorithmGivesThreeByOneTable) {
  const std::string out = testing::TempDir("cli_bench1");
  const CliRun r = Cli({"benchmark", "--data", SmallData(), "--grids", Grids(),
                     "--folds", "3", "--algorithms", "DT", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const CsvTable t = ParseCsv(ReadTextFile(Path(out, "benchmark.csv")));
  EXPECT_EQ(t.header, (std::vector<std::string>{"metric", "DT"}));
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0][0], "MAE");
  EXPECT_EQ(t.rows[1][0], "MSE");
  EXPECT_EQ(t.rows[2][0], "MAPE");
  EXPECT_TRUE(fs::exists(Path(out, "benchmark.json")));
  EXPECT_TRUE(fs::exists(Path(out, "benchmark.svg")));
}

TEST_F(CliBenchmark, RerunIsByteIdentical) {
  const std::string grids = Grids();
  std::vector<std::map<std::string, std::string>> runs;
  for (const char* tag : {"cli_bench_a", "cli_bench_b"}) {
    const std::string out = testing::TempDir(tag);
    const CliRun r = Cli({"benchmark", "--data", SmallData(), "--grids", grids,
                       "--folds", "3", "--algorithms", "DT,LR,KNN", "--seed", "4",
                       "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    runs.push_back(DirContents(out));
  }
  EXPECT_EQ(runs[0], runs[1]);
  EXPECT_EQ(runs[0].count("run_manifest.json"), 1u);
  EXPECT_EQ(runs[0].count("benchmark.svg"), 1u);
}

TEST(CliExplain, UnknownFeatureNamesIt) {
  std::vector<std::string> args = ExplainArgs(testing::TempDir("cli_unknown"));
  args.insert(args.end(), {"--ale", "Comments,Sparkle"});
  const CliRun r = Cli(args);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Sparkle"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("schema"), std::string::npos) << r.err;
}

TEST(CliExplain, GroupSplitWithoutFemaleIsSchemaError) {
  const std::string dir = testing::TempDir("cli_nofemale");
  nlohmann::json schema = dataset::SchemaToJson(dataset::FeatureSchema::Default());
  nlohmann::json kept = nlohmann::json::array();
  for (const auto& v : schema["variables"]) {
    if (v["name"] != "Female") kept.push_back(v);
  }
  schema["variables"] = kept;
  WriteTextFile(Path(dir, "schema.json"), schema.dump(2));

  const CsvTable t = ParseCsv(ReadTextFile(SmallData()));
  std::size_t drop = 0;
  while (t.header[drop] != "Female") ++drop;
  auto without = [drop](std::vector<std::string> row) {
    row.erase(row.begin() + static_cast<std::ptrdiff_t>(drop));
    return row;
  };
  std::string text = FormatCsvLine(without(t.header));
  for (const auto& row : t.rows) text += FormatCsvLine(without(row));
  WriteTextFile(Path(dir, "data.csv"), text);

  const CliRun r = Cli({"explain", "--data", Path(dir, "data.csv"), "--schema",
                     Path(dir, "schema.json"), "--group-split", "--out", dir});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("schema"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("Female"), std::string::npos) << r.err;
}

TEST(CliExplain, DefaultAleBinsAndDeterministicFiles) {
  std::vector<std::map<std::string, std::string>> runs;
  for (const char* tag : {"cli_explain_a", "cli_explain_b"}) {
    const std::string out = testing::TempDir(tag);
    std::vector<std::string> args = ExplainArgs(out);
    args.insert(args.end(), {"--ale", "Comments", "--shap3d", "Comments",
                             "--group-split", "--threads", "1"});
    const CliRun r = Cli(args);
    ASSERT_EQ(r.code, 0) << r.err;
    runs.push_back(DirContents(out));
  }
  EXPECT_EQ(runs[0], runs[1]);
  const auto& files = runs[0];
  for (const char* name :
       {"ale_Comments.csv", "ale_Comments.svg", "ale_Comments.json",
        "shap_values.csv", "shap_meta.json", "importance.csv", "importance.svg",
        "summary_points.csv", "summary.svg", "target_distribution.svg",
        "shap3d_Comments_points.csv", "shap3d_Comments_grid.csv",
        "shap3d_Comments.json", "shap3d_Comments.svg", "group_importance.csv",
        "group_importance.svg", "run_manifest.json", "model.json"}) {
    EXPECT_EQ(files.count(name), 1u) << name;
  }
  const explain::AleCurve ale = explain::AleFromCsv(files.at("ale_Comments.csv"));
  EXPECT_EQ(ale.bins(), 20u);
  EXPECT_EQ(files.at("ale_Comments.svg").find("<svg"), 0u);

  const nlohmann::json manifest = nlohmann::json::parse(files.at("run_manifest.json"));
  EXPECT_EQ(manifest["seed"], 42);
  EXPECT_EQ(manifest["command"], "explain");
  EXPECT_EQ(manifest["inputs"]["data"]["fnv1a64"], HexU64(Fnv1a64(ReadTextFile(SmallData()))));
  EXPECT_EQ(manifest["outputs"]["shap_values.csv"],
            HexU64(Fnv1a64(files.at("shap_values.csv"))));
}

TEST(CliExplain, EmittedCsvsRoundTrip) {
  const std::string out = testing::TempDir("cli_roundtrip");
  std::vector<std::string> args = ExplainArgs(out);
  args.insert(args.end(), {"--ale", "Likes", "--shap3d", "Page_Views"});
  ASSERT_EQ(Cli(args).code, 0);
  auto same = [&](const std::string& name, auto parse, auto format) {
    const std::string text = ReadTextFile(Path(out, name));
    EXPECT_EQ(format(parse(text)), text) << name;
  };
  same("shap_values.csv", explain::ShapMatrixFromCsv,
       [](const explain::ShapMatrix& m) { return explain::ShapMatrixToCsv(m); });
  same("importance.csv", explain::ImportanceFromCsv,
       [](const explain::GlobalImportance& g) { return explain::ImportanceToCsv(g); });
  same("ale_Likes.csv", explain::AleFromCsv,
       [](const explain::AleCurve& c) { return explain::AleToCsv(c); });
  const std::string grid = ReadTextFile(Path(out, "shap3d_Page_Views_grid.csv"));
  const explain::Shap3DSurface s =
      explain::Shap3DFromCsv(ReadTextFile(Path(out, "shap3d_Page_Views_points.csv")), grid);
  EXPECT_EQ(explain::Shap3DGridToCsv(s), grid);
  EXPECT_EQ(s.x.size(), 60);

  const dataset::Dataset data = dataset::LoadCsv(SmallData(), dataset::FeatureSchema::Default());
  EXPECT_EQ(dataset::DatasetToCsv(data), ReadTextFile(SmallData()));
}

TEST(CliExplain, ModelFileMustMatchFeatureCount) {
  const std::string dir = testing::TempDir("cli_model_mismatch");
  models::ModelSpec spec;
  spec.algorithm = models::Algorithm::kLR;
  const Matrix x = testing::UniformMatrix(30, 3, 0.0, 1.0, 1);
  const Vector y = x.rowwise().sum();
  models::SaveModel(models::Fit(spec, x, y), Path(dir, "model.json"));
  const CliRun r = Cli({"explain", "--data", SmallData(), "--model", Path(dir, "model.json"),
                     "--out", dir});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("features"), std::string::npos) << r.err;
}

TEST(CliExplain, ExactShapRejectedForWideData) {
  std::vector<std::string> args = ExplainArgs(testing::TempDir("cli_exact"));
  args.insert(args.end(), {"--shap", "exact"});
  const CliRun r = Cli(args);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("sampled"), std::string::npos) << r.err;
}

// ln GMV depends on Likes only through a bump centered inside the bulk of
// log(Likes); the smoothed SHAP curve must rise and then fall.
TEST(CliExplain, InvertedUFlagsDecliningFinalSegment) {
  const std::string dir = testing::TempDir("cli_inverted_u");
  dataset::SyntheticSpec spec = dataset::SyntheticSpec::Default();
  spec.correlations.clear();
  spec.response.terms = {{dataset::ResponseTerm::Kind::kBump, {"Likes"}, 2.5, {10.0},
                          {0.8}, dataset::ResponseTerm::Gate::kNone}};
  spec.noise_std = 0.15;
  WriteTextFile(Path(dir, "spec.json"), dataset::SyntheticSpecToJson(spec).dump(2));
  ASSERT_EQ(Cli({"generate", "--spec", Path(dir, "spec.json"), "--rows", "800",
                 "--seed", "21", "--out", dir})
                .code,
            0);
  const CliRun r = Cli({"explain", "--data", Path(dir, "data.csv"), "--algorithm", "RF",
                     "--params", R"({"n_estimators": 30})", "--permutations", "10",
                     "--background", "30", "--explain-rows", "400", "--shap3d",
                     "Likes", "--out", dir});
  ASSERT_EQ(r.code, 0) << r.err;
  const nlohmann::json meta = nlohmann::json::parse(ReadTextFile(Path(dir, "shap3d_Likes.json")));
  const auto& th = meta["thresholds"];
  EXPECT_TRUE(th["declining_final_segment"].get<bool>()) << th.dump();
  EXPECT_LT(th["slopes"][2].get<double>(), 0.0);
  EXPECT_GT(th["slopes"][1].get<double>(), 0.0);
}

TEST(CliConfig, FlagsBeatEnvironmentBeatConfigFile) {
  const std::string dir = testing::TempDir("cli_precedence");
  WriteTextFile(Path(dir, "config.json"), R"({"seed": 1, "rows": 7})");
  auto manifest = [&](std::vector<std::string> extra,
                      std::map<std::string, std::string> env) {
    std::vector<std::string> args = {"generate", "--out", dir};
    args.insert(args.end(), extra.begin(), extra.end());
    const CliRun r = Cli(args, env);
    EXPECT_EQ(r.code, 0) << r.err;
    return nlohmann::json::parse(ReadTextFile(Path(dir, "run_manifest.json")));
  };
  const std::string cfg = Path(dir, "config.json");
  EXPECT_EQ(manifest({"--rows", "5"}, {})["seed"], 42);
  EXPECT_EQ(manifest({"--config", cfg}, {})["seed"], 1);
  EXPECT_EQ(manifest({"--config", cfg}, {})["config"]["rows"], 7);
  EXPECT_EQ(manifest({"--config", cfg}, {{"GMVX_SEED", "2"}})["seed"], 2);
  EXPECT_EQ(manifest({"--config", cfg, "--seed", "3"}, {{"GMVX_SEED", "2"}})["seed"], 3);
  EXPECT_EQ(manifest({}, {{"GMVX_CONFIG", cfg}, {"GMVX_ROWS", "6"}})["config"]["rows"], 6);
  const CsvTable t = ParseCsv(ReadTextFile(Path(dir, "data.csv")));
  EXPECT_EQ(t.rows.size(), 6u);
}

TEST(CliConfig, BadConfigIsUserError) {
  const std::string dir = testing::TempDir("cli_bad_config");
  WriteTextFile(Path(dir, "unknown.json"), R"({"ale": "Comments"})");
  WriteTextFile(Path(dir, "broken.json"), "{ seed: ");
  EXPECT_EQ(Cli({"generate", "--config", Path(dir, "unknown.json"), "--out", dir}).code, 2);
  EXPECT_EQ(Cli({"generate", "--config", Path(dir, "broken.json"), "--out", dir}).code, 2);
  EXPECT_EQ(Cli({"generate", "--out", dir}, {{"GMVX_ROWS", "-3"}}).code, 2);
}

}  // namespace
}  // namespace gmvx::cli
