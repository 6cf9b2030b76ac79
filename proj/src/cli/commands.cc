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

#include <algorithm>
#include <filesystem>
#include <map>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "gmvx/common/csv.h"
#include "gmvx/common/error.h"
#include "gmvx/common/parallel.h"
#include "gmvx/common/random.h"
#include "gmvx/dataset/dataset.h"
#include "gmvx/dataset/synthetic.h"
#include "gmvx/explain/ale.h"
#include "gmvx/explain/artifacts.h"
#include "gmvx/explain/importance.h"
#include "gmvx/explain/shap3d.h"
#include "gmvx/explain/shapley.h"
#include "gmvx/models/fitted_model.h"
#include "gmvx/report/plots.h"
#include "gmvx/tuning/benchmark.h"
#include "gmvx/tuning/grid_search.h"
#include "gmvx/tuning/metrics.h"

namespace gmvx::cli {
namespace {

namespace fs = std::filesystem;
using models::Algorithm;

const std::map<std::string, std::vector<std::string>>& OptionTable() {
  static const std::map<std::string, std::vector<std::string>> table = [] {
    const std::vector<std::string> common = {"seed", "threads", "out"};
    const std::vector<std::string> input = {"data", "schema", "strict"};
    const std::vector<std::string> explain = {
        "model", "algorithm", "params", "shap", "permutations", "background",
        "explain-rows", "ale", "ale-bins", "ale-trajectories", "shap3d",
        "knn-smooth", "group-split"};
    auto join = [](std::initializer_list<std::vector<std::string>> parts) {
      std::vector<std::string> out;
      for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
      return out;
    };
    std::map<std::string, std::vector<std::string>> t;
    t["generate"] = join({common, {"spec", "rows"}});
    t["validate"] = join({common, input});
    t["benchmark"] = join({common, input, {"grids", "folds", "metric", "algorithms", "holdout"}});
    t["tune"] = join({common, input, {"grids", "folds", "metric", "algorithm"}});
    t["train"] = join({common, input, {"algorithm", "params"}});
    t["explain"] = join({common, input, explain});
    t["report"] = join({common, input, explain});
    return t;
  }();
  return table;
}

const std::map<std::string, std::string>& Descriptions() {
  static const std::map<std::string, std::string> d = {
      {"generate", "write a calibrated synthetic dataset"},
      {"validate", "check a dataset against the schema bounds"},
      {"benchmark", "tune and cross-validate all eight regressors"},
      {"tune", "grid-search one regressor"},
      {"train", "fit one regressor on the full dataset"},
      {"explain", "SHAP, ALE and 3D-SHAP artifacts for a model"},
      {"report", "every figure for one dataset and model"},
  };
  return d;
}

nlohmann::json ParseJsonText(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorCode::kParse, what + ": " + e.what());
  }
}

class Context {
 public:
  Context(std::string command, RunConfig config, std::ostream& out, std::ostream& err)
      : command_(std::move(command)), cfg(std::move(config)), out(out), err(err) {}

  const std::string& command() const { return command_; }

  void RecordInput(const std::string& label, const std::string& path) {
    const std::string text = ReadTextFile(path);
    inputs_[label] = {{"path", path},
                      {"bytes", text.size()},
                      {"fnv1a64", HexU64(Fnv1a64(text))}};
  }

  void Emit(const std::string& name, const std::string& contents) {
    fs::create_directories(cfg.out);
    WriteTextFile((fs::path(cfg.out) / name).string(), contents);
    outputs_[name] = HexU64(Fnv1a64(contents));
  }

  void EmitJson(const std::string& name, const nlohmann::json& doc) {
    Emit(name, doc.dump(2) + "\n");
  }

  // Seeds, version, resolved options (minus the output path) and checksums
  // of every input and output, so a rerun can be verified byte for byte.
  void WriteManifest() {
    std::vector<std::string> names;
    for (const auto& n : OptionTable().at(command_)) {
      if (n != "out") names.push_back(n);
    }
    nlohmann::json doc;
    doc["tool"] = "gmvx";
    doc["version"] = GMVX_VERSION;
    doc["command"] = command_;
    doc["seed"] = cfg.seed;
    doc["config"] = ConfigToJson(cfg, names);
    doc["inputs"] = inputs_;
    doc["outputs"] = outputs_;
    fs::create_directories(cfg.out);
    WriteTextFile((fs::path(cfg.out) / "run_manifest.json").string(), doc.dump(2) + "\n");
  }

  std::size_t outputs() const { return outputs_.size(); }

 private:
  std::string command_;
  nlohmann::json inputs_ = nlohmann::json::object();
  std::map<std::string, std::string> outputs_;

 public:
  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;
};

dataset::FeatureSchema SchemaFor(Context& ctx) {
  if (ctx.cfg.schema.empty()) return dataset::FeatureSchema::Default();
  ctx.RecordInput("schema", ctx.cfg.schema);
  return dataset::LoadSchema(ctx.cfg.schema);
}

dataset::Dataset LoadRaw(Context& ctx) {
  if (ctx.cfg.data.empty()) Fail(ErrorCode::kInvalidArgument, "--data is required");
  const dataset::FeatureSchema schema = SchemaFor(ctx);
  ctx.RecordInput("data", ctx.cfg.data);
  return dataset::LoadCsv(ctx.cfg.data, schema);
}

dataset::Dataset LoadTransformed(Context& ctx) {
  const dataset::Dataset raw = LoadRaw(ctx);
  const dataset::ValidationReport report =
      dataset::Validate(raw, {.strict = ctx.cfg.strict});
  if (!report.empty()) ctx.err << "warning: " << report.Describe() << "\n";
  return dataset::ApplyTransforms(raw);
}

void ApplyThreads(const RunConfig& cfg) {
  if (cfg.threads < 0) Fail(ErrorCode::kInvalidArgument, "--threads must be >= 0");
  if (cfg.threads > 0) SetDefaultThreadCount(cfg.threads);
}

tuning::GridSet GridsFor(Context& ctx) {
  if (ctx.cfg.grids.empty()) return tuning::DefaultGrids();
  ctx.RecordInput("grids", ctx.cfg.grids);
  return tuning::LoadGrids(ctx.cfg.grids);
}

models::ModelSpec SpecFromConfig(Context& ctx) {
  models::ModelSpec spec;
  spec.algorithm = models::ParseAlgorithm(ctx.cfg.algorithm);
  spec.seed = ctx.cfg.seed;
  const std::string& p = ctx.cfg.params;
  if (p.empty()) return spec;
  std::string text = p;
  if (p.front() != '{') {
    ctx.RecordInput("params", p);
    text = ReadTextFile(p);
  }
  const nlohmann::json doc = ParseJsonText(text, "--params");
  if (!doc.is_object()) Fail(ErrorCode::kParse, "--params must be a JSON object");
  if (doc.contains("algorithm")) {
    // A full spec, such as the best_spec.json written by tune.
    models::ModelSpec full = models::SpecFromJson(doc);
    if (!doc.contains("seed")) full.seed = ctx.cfg.seed;
    return full;
  }
  for (const auto& [key, value] : doc.items()) {
    spec.params.Set(key, models::ParamFromJson(value));
  }
  return spec;
}

std::string Table(const tuning::BenchmarkReport& r) {
  std::ostringstream s;
  s << "algorithm        MAE        MSE    MAPE(%)  rank\n";
  for (const auto& row : r.rows) {
    std::string name(models::AlgorithmName(row.algorithm));
    name.resize(10, ' ');
    s << name;
    if (!row.ok) {
      s << "  failed: " << row.error << "\n";
      continue;
    }
    auto cell = [](double v) {
      std::string t = FormatFixed(v, 4);
      return std::string(t.size() < 11 ? 11 - t.size() : 0, ' ') + t;
    };
    s << cell(row.metrics.mae) << cell(row.metrics.mse) << cell(row.metrics.mape)
      << "  " << r.RankOf(row.algorithm) << "\n";
  }
  return s.str();
}

// ---------------------------------------------------------------- commands

void Generate(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  if (c.rows == 0) Fail(ErrorCode::kInvalidArgument, "--rows must be at least 1");
  dataset::SyntheticSpec spec = dataset::SyntheticSpec::Default();
  if (!c.spec.empty()) {
    ctx.RecordInput("spec", c.spec);
    spec = dataset::LoadSyntheticSpec(c.spec);
  }
  const dataset::Dataset ds = dataset::Synthesize(spec, c.rows, c.seed);
  const dataset::CalibrationReport cal = dataset::MeasureCalibration(spec, ds);
  ctx.Emit("data.csv", dataset::DatasetToCsv(ds));
  ctx.Emit("calibration.txt", cal.Format());
  ctx.WriteManifest();
  ctx.out << cal.Format();
  ctx.out << "wrote " << c.rows << " rows to " << (fs::path(c.out) / "data.csv").string()
          << "\n";
}

void ValidateCmd(Context& ctx) {
  const dataset::Dataset raw = LoadRaw(ctx);
  const dataset::ValidationReport report =
      dataset::Validate(raw, {.strict = ctx.cfg.strict});
  if (report.empty()) {
    ctx.out << "ok: " << raw.rows() << " rows, no bound violations\n";
  } else {
    ctx.out << report.Describe() << "\n";
  }
}

void Benchmark(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const dataset::Dataset ds = LoadTransformed(ctx);
  const tuning::GridSet grids = GridsFor(ctx);
  tuning::BenchmarkOptions opt;
  opt.seed = c.seed;
  opt.folds = c.folds;
  opt.metric = tuning::ParseMetric(c.metric);
  opt.holdout_fraction = c.holdout;
  opt.threads = c.threads;
  if (!c.algorithms.empty()) {
    opt.algorithms.clear();
    for (const auto& a : c.algorithms) opt.algorithms.push_back(models::ParseAlgorithm(a));
  }
  opt.progress = [&](const std::string& msg) { ctx.err << msg << "\n"; };
  const tuning::BenchmarkReport report = tuning::BenchmarkAll(ds, grids, opt);
  ctx.Emit("benchmark.csv", tuning::BenchmarkCsv(report));
  ctx.EmitJson("benchmark.json", tuning::BenchmarkToJson(report));
  ctx.Emit("benchmark.svg", report::BenchmarkSvg(report));
  ctx.WriteManifest();
  ctx.out << Table(report);
  if (report.best) ctx.out << "best: " << models::AlgorithmName(*report.best) << "\n";
}

void Tune(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const dataset::Dataset ds = LoadTransformed(ctx);
  const tuning::GridSet grids = GridsFor(ctx);
  const Algorithm a = models::ParseAlgorithm(c.algorithm);
  const auto it = grids.find(a);
  if (it == grids.end()) {
    Fail(ErrorCode::kInvalidArgument,
         "grid file has no entry for " + std::string(models::AlgorithmName(a)));
  }
  const dataset::FoldPlan plan = dataset::MakeFolds(ds.rows(), c.folds, c.seed);
  const tuning::SearchResult r =
      tuning::GridSearch(it->second, ds.features(), ds.target(), plan,
                         tuning::ParseMetric(c.metric), c.seed, c.threads);
  const std::string tag(models::AlgorithmName(a));
  ctx.EmitJson("tune_" + tag + ".json", tuning::SearchToJson(r));
  ctx.EmitJson("best_spec.json", models::SpecToJson(r.best_config));
  ctx.WriteManifest();
  std::size_t failed = 0;
  for (const auto& cfg : r.configs) failed += cfg.ok ? 0 : 1;
  ctx.out << tag << ": " << r.configs.size() << " configurations (" << failed
          << " failed)\nbest: " << r.best_config.params.ToString() << "\n"
          << "  MAE " << FormatFixed(r.best().mean.mae, 4) << "  MSE "
          << FormatFixed(r.best().mean.mse, 4) << "  MAPE "
          << FormatFixed(r.best().mean.mape, 4) << "%\n";
}

void Train(Context& ctx) {
  const dataset::Dataset ds = LoadTransformed(ctx);
  const models::ModelSpec spec = SpecFromConfig(ctx);
  const models::FittedModel model = models::Fit(spec, ds.features(), ds.target());
  const tuning::Metrics m =
      tuning::ComputeMetrics(ds.target(), model.Predict(ds.features()), false);
  ctx.EmitJson("model.json", models::ModelToJson(model));
  nlohmann::json info;
  info["spec"] = models::SpecToJson(spec);
  info["rows"] = ds.rows();
  info["training_metrics"] = tuning::MetricsToJson(m);
  info["warnings"] = model.warnings();
  ctx.EmitJson("training.json", info);
  ctx.WriteManifest();
  for (const auto& w : model.warnings()) ctx.err << "warning: " << w << "\n";
  ctx.out << "trained " << models::AlgorithmName(spec.algorithm) << " on " << ds.rows()
          << " rows; in-sample MAE " << FormatFixed(m.mae, 4) << ", MSE "
          << FormatFixed(m.mse, 4) << "\n";
}

std::size_t ResolveFeature(const dataset::Dataset& ds, const std::string& name) {
  const auto col = ds.schema().PredictorColumn(name);
  if (!col) Fail(ErrorCode::kSchema, "unknown feature '" + name + "'");
  return *col;
}

std::vector<std::size_t> ExplainRows(const RunConfig& c, std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  if (c.explain_rows == 0 || c.explain_rows >= n) return rows;
  Rng rng(DeriveSeed(c.seed, 2));
  rng.Shuffle(std::span<std::size_t>(rows));
  rows.resize(c.explain_rows);
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::string FileSafe(std::string name) {
  for (char& ch : name) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-') ch = '_';
  }
  return name;
}

void Explain(Context& ctx, bool bundle) {
  RunConfig& c = ctx.cfg;
  const dataset::Dataset ds = LoadTransformed(ctx);
  const auto names = ds.schema().predictor_names();
  explain::ShapOptions shap;
  shap.method = explain::ParseShapMethod(c.shap);
  shap.n_permutations = c.permutations;
  shap.seed = c.seed;
  shap.threads = c.threads;
  if (shap.method == explain::ShapMethod::kExact && ds.cols() > explain::kMaxExactFeatures) {
    Fail(ErrorCode::kCapability,
         "exact SHAP supports at most " + std::to_string(explain::kMaxExactFeatures) +
             " features; this data has " + std::to_string(ds.cols()) +
             " (use --shap sampled)");
  }
  if (c.ale_bins < 2) Fail(ErrorCode::kInvalidArgument, "--ale-bins must be at least 2");
  // Resolve names before any fitting so typos fail fast.
  for (const auto& f : c.ale) ResolveFeature(ds, f);
  for (const auto& f : c.shap3d) ResolveFeature(ds, f);
  const bool has_female = ds.schema().PredictorColumn("Female").has_value();
  if (c.group_split && !has_female) {
    Fail(ErrorCode::kSchema, "--group-split needs a Female column in the schema");
  }

  std::optional<models::FittedModel> fitted;
  if (!c.model.empty()) {
    ctx.RecordInput("model", c.model);
    fitted = models::LoadModel(c.model);
  } else {
    fitted = models::Fit(SpecFromConfig(ctx), ds.features(), ds.target());
    ctx.EmitJson("model.json", models::ModelToJson(*fitted));
  }
  const models::FittedModel& model = *fitted;
  if (model.num_features() != ds.cols()) {
    Fail(ErrorCode::kInvalidArgument,
         "model expects " + std::to_string(model.num_features()) +
             " features but the data has " + std::to_string(ds.cols()));
  }
  const explain::Predictor predict = explain::ModelPredictor(model);

  const std::vector<std::size_t> rows = ExplainRows(c, ds.rows());
  const Matrix x = SelectRows(ds.features(), rows);
  const Vector y = SelectRows(ds.target(), rows);
  const Matrix background =
      explain::SampleBackground(ds.features(), c.background, DeriveSeed(c.seed, 1));
  ctx.err << "explaining " << rows.size() << " rows against " << background.rows()
          << " background rows\n";
  const explain::ShapMatrix sm =
      explain::ComputeShapMatrix(predict, x, background, names, shap);
  nlohmann::json meta = explain::ShapMetaJson(sm);
  std::vector<std::string> ids;
  for (std::size_t r : rows) ids.push_back(ds.row_ids()[r]);
  meta["row_ids"] = ids;
  ctx.Emit("shap_values.csv", explain::ShapMatrixToCsv(sm));
  ctx.EmitJson("shap_meta.json", meta);

  const explain::GlobalImportance importance = explain::ComputeGlobalImportance(sm);
  ctx.Emit("importance.csv", explain::ImportanceToCsv(importance));
  ctx.Emit("importance.svg", report::ImportanceBarSvg(importance));
  const explain::SummaryPoints summary = explain::ComputeSummaryPoints(sm, x);
  ctx.Emit("summary_points.csv", explain::SummaryPointsToCsv(summary));
  ctx.Emit("summary.svg", report::SummarySvg(summary));
  ctx.Emit("target_distribution.svg",
           report::DistributionSvg(ds.target(), "ln(" + ds.schema().target_name() + ")"));

  std::vector<std::string> ale = c.ale;
  std::vector<std::string> shap3d = c.shap3d;
  bool group = c.group_split;
  if (bundle) {
    const std::size_t top = std::min<std::size_t>(3, importance.ranking.size());
    for (std::size_t r = 0; r < top; ++r) {
      const std::string& name = names[importance.ranking[r]];
      if (c.ale.empty()) ale.push_back(name);
      if (c.shap3d.empty()) shap3d.push_back(name);
    }
    group = group || has_female;
  }

  nlohmann::json summary_doc;
  summary_doc["top_features"] = nlohmann::json::array();
  for (std::size_t r = 0; r < std::min<std::size_t>(10, importance.ranking.size()); ++r) {
    const std::size_t j = importance.ranking[r];
    summary_doc["top_features"].push_back(
        {{"feature", names[j]}, {"sum_abs", importance.sum_abs[static_cast<Eigen::Index>(j)]}});
  }

  for (const auto& name : ale) {
    const std::size_t j = ResolveFeature(ds, name);
    explain::AleOptions opt;
    opt.bins = c.ale_bins;
    opt.trajectory_rows = c.ale_trajectories;
    const explain::AleCurve curve = explain::ComputeAle(predict, ds.features(), j, opt, name);
    const std::string stem = "ale_" + FileSafe(name);
    ctx.Emit(stem + ".csv", explain::AleToCsv(curve));
    ctx.EmitJson(stem + ".json", explain::AleMetaJson(curve));
    if (curve.trajectories.rows() > 0) {
      ctx.Emit(stem + "_trajectories.csv", explain::AleTrajectoriesToCsv(curve));
    }
    ctx.Emit(stem + ".svg", report::AleSvg(curve));
    summary_doc["ale"][name] = explain::AleMetaJson(curve);
  }

  for (const auto& name : shap3d) {
    const std::size_t j = ResolveFeature(ds, name);
    const explain::Shap3DSurface s =
        explain::ComputeShap3D(sm, x, y, j, {c.knn_smooth, 100});
    const std::string stem = "shap3d_" + FileSafe(name);
    ctx.Emit(stem + "_points.csv", explain::Shap3DPointsToCsv(s, ids));
    ctx.Emit(stem + "_grid.csv", explain::Shap3DGridToCsv(s));
    ctx.EmitJson(stem + ".json", explain::Shap3DMetaJson(s));
    ctx.Emit(stem + ".svg",
             report::Shap3DSvg(s, "ln(" + ds.schema().target_name() + ")"));
    summary_doc["shap3d"][name] = explain::Shap3DMetaJson(s)["thresholds"];
  }

  if (group) {
    explain::GroupImportanceOptions opt;
    opt.seed = c.seed;
    opt.background_rows = c.background;
    opt.shap = shap;
    const dataset::GroupSplit split = dataset::SplitByGender(ds);
    const explain::GroupImportance g =
        explain::ComputeGroupImportance(model.spec(), ds, split, opt);
    ctx.Emit("group_importance.csv", explain::GroupImportanceToCsv(g));
    ctx.Emit("group_importance.svg", report::GroupImportanceSvg(g));
    nlohmann::json gdoc = {{"female_rows", g.female_rows},
                           {"male_rows", g.male_rows},
                           {"excluded_rows", split.excluded.size()},
                           {"female_test_rows", g.female_test_rows},
                           {"male_test_rows", g.male_test_rows}};
    ctx.EmitJson("group_importance.json", gdoc);
    summary_doc["group_split"] = gdoc;
  }

  if (bundle) {
    summary_doc["model"] = models::SpecToJson(model.spec());
    summary_doc["explained_rows"] = rows.size();
    ctx.EmitJson("report.json", summary_doc);
  }
  ctx.WriteManifest();

  ctx.out << "top features by sum of |SHAP|:\n";
  for (std::size_t r = 0; r < std::min<std::size_t>(5, importance.ranking.size()); ++r) {
    const std::size_t j = importance.ranking[r];
    ctx.out << "  " << r + 1 << ". " << names[j] << "  "
            << FormatFixed(importance.sum_abs[static_cast<Eigen::Index>(j)], 4) << "\n";
  }
  ctx.out << "wrote " << ctx.outputs() + 1 << " files to " << c.out << "\n";
}

void Dispatch(Context& ctx) {
  ApplyThreads(ctx.cfg);
  const std::string& cmd = ctx.command();
  if (cmd == "generate") return Generate(ctx);
  if (cmd == "validate") return ValidateCmd(ctx);
  if (cmd == "benchmark") return Benchmark(ctx);
  if (cmd == "tune") return Tune(ctx);
  if (cmd == "train") return Train(ctx);
  if (cmd == "explain") return Explain(ctx, false);
  if (cmd == "report") return Explain(ctx, true);
  Fail(ErrorCode::kInternal, "unhandled command " + cmd);
}

struct SubcommandFlags {
  CLI::App* app = nullptr;
  std::string config;
  std::map<std::string, std::string> values;
  std::map<std::string, std::vector<std::string>> lists;
  std::map<std::string, bool> flags;
};

}  // namespace

const std::vector<std::string>& CommandNames() {
  static const std::vector<std::string> names = {
      "generate", "validate", "benchmark", "tune", "train", "explain", "report"};
  return names;
}

const std::vector<std::string>& CommandOptions(std::string_view command) {
  const auto it = OptionTable().find(std::string(command));
  if (it == OptionTable().end()) {
    Fail(ErrorCode::kInvalidArgument, "unknown command " + std::string(command));
  }
  return it->second;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err, const EnvLookup& env) {
  CLI::App app{"gmvx: explainable regression toolkit for livestream sales"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GMVX_VERSION);
  std::map<std::string, SubcommandFlags> subs;
  for (const auto& name : CommandNames()) {
    SubcommandFlags& s = subs[name];
    s.app = app.add_subcommand(name, Descriptions().at(name));
    s.app->add_option("--config", s.config, "JSON config file (keys are option names)");
    for (const auto& opt : CommandOptions(name)) {
      const OptionInfo& info = FindOption(opt);
      const std::string flag = "--" + opt;
      switch (info.kind) {
        case OptionKind::kBool:
          s.app->add_flag(flag, s.flags[opt], info.help);
          break;
        case OptionKind::kList:
          s.app->add_option(flag, s.lists[opt], info.help)->delimiter(',')->type_name("NAME");
          break;
        default:
          s.app->add_option(flag, s.values[opt], info.help)
              ->type_name(info.kind == OptionKind::kString     ? "TEXT"
                          : info.kind == OptionKind::kDouble ? "FLOAT"
                                                             : "INT");
      }
    }
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  std::string command;
  for (auto& [name, s] : subs) {
    if (s.app->parsed()) command = name;
  }
  SubcommandFlags& s = subs.at(command);
  try {
    const auto& allowed = CommandOptions(command);
    RunConfig cfg;
    std::string config_path = s.config;
    if (config_path.empty()) config_path = env("GMVX_CONFIG").value_or("");
    if (!config_path.empty()) {
      ApplyConfigJson(cfg, ParseJsonText(ReadTextFile(config_path), config_path), allowed);
    }
    ApplyEnvironment(cfg, env, allowed);
    for (const auto& opt : allowed) {
      if (s.app->count("--" + opt) == 0) continue;
      switch (FindOption(opt).kind) {
        case OptionKind::kBool:
          SetOption(cfg, opt, s.flags[opt] ? "true" : "false");
          break;
        case OptionKind::kList: {
          std::string joined;
          for (const auto& v : s.lists[opt]) joined += (joined.empty() ? "" : ",") + v;
          SetOption(cfg, opt, joined);
          break;
        }
        default:
          SetOption(cfg, opt, s.values[opt]);
      }
    }
    Context ctx(command, std::move(cfg), out, err);
    Dispatch(ctx);
    return 0;
  } catch (const Error& e) {
    err << "gmvx " << command << ": " << ErrorCodeName(e.code()) << ": " << e.what()
        << "\n";
    return IsUserError(e.code()) ? 2 : 1;
  } catch (const nlohmann::json::exception& e) {
    err << "gmvx " << command << ": malformed JSON input: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "gmvx " << command << ": file system error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "gmvx " << command << ": internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gmvx::cli
