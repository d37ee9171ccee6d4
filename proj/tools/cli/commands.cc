/*
 * Copyright 2026 The regime-xai Authors.
 *
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

#include "cli/commands.h"

#include <algorithm>
#include <filesystem>
#include <set>
#include <utility>
#include <variant>

#include "CLI11.hpp"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "cli/pipeline.h"
#include "cli/run_config.h"
#include "nlohmann/json.hpp"
#include "regime_xai/experiment/experiment.h"
#include "regime_xai/timeseries/synthetic.h"
#include "regime_xai/timeseries/time_table.h"
#include "regime_xai/utils/parallel.h"
#include "regime_xai/utils/random.h"
#include "regime_xai/utils/status_macros.h"
#include "regime_xai/version.h"

namespace regime_xai::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

absl::StatusOr<fs::path> OutputDir(const CommandOptions& options,
                                   const RunConfig* config) {
  if (!options.out_dir.empty()) return fs::path(options.out_dir);
  if (config != nullptr && !config->output_dir.empty()) {
    return config->ResolveInput(config->output_dir);
  }
  return absl::InvalidArgumentError(
      "No output directory: pass --out or set output_dir in the config");
}

absl::StatusOr<RunConfig> LoadConfig(const CommandOptions& options) {
  if (options.config_path.empty()) {
    return absl::InvalidArgumentError("--config is required for this command");
  }
  return LoadRunConfig(options.config_path, options.overrides);
}

// Output files get a fixed trailing newline so that diffs stay clean.
absl::Status WriteJson(const fs::path& path, const json& doc) {
  return timeseries::WriteFile(path, doc.dump(2) + "\n");
}

// Records `relative` for the manifest and writes the file.
class OutputWriter {
 public:
  explicit OutputWriter(fs::path root) : root_(std::move(root)) {}

  absl::Status Write(const std::string& relative, absl::string_view content) {
    files_.insert(relative);
    return timeseries::WriteFile(root_ / relative, content);
  }

  const std::set<std::string>& files() const { return files_; }

 private:
  fs::path root_;
  std::set<std::string> files_;
};

json PeriodJson(const PeriodData& p) {
  return {{"name", p.spec.name},
          {"start", timeseries::FormatTimestamp(p.spec.start)},
          {"end", timeseries::FormatTimestamp(p.spec.end)},
          {"grid_rows", p.grid_rows},
          {"rows", p.matrix.size()},
          {"dropped_rows", p.matrix.dropped_rows}};
}

json NamedVector(const std::vector<std::string>& names,
                 const std::vector<double>& values) {
  json j = json::object();
  for (size_t i = 0; i < names.size(); ++i) j[names[i]] = values[i];
  return j;
}

std::string WindowFile(const std::string& dir, const std::string& period,
                       size_t window, const char* ext) {
  return absl::StrCat(dir, "/", period, "_w", window, ext);
}

json WindowJson(const experiment::WindowResult& w,
                const timeseries::FeatureMatrix& period,
                const std::vector<std::string>& features,
                const std::string& model_file,
                const std::string& explanation_file) {
  json j = {{"index", w.window_index},
            {"seed", w.seed},
            {"row_begin", w.rows.begin},
            {"row_end", w.rows.end},
            {"first_timestamp", timeseries::FormatTimestamp(period.timestamps[w.rows.begin])},
            {"last_timestamp", timeseries::FormatTimestamp(period.timestamps[w.rows.end - 1])},
            {"split_seed", w.split.seed},
            {"n_blocks", w.split.n_blocks},
            {"block_rows", w.split.block_rows},
            {"test_blocks", w.split.test_blocks},
            {"train_rows", w.split.train_rows.size()},
            {"test_rows", w.split.test_rows.size()},
            {"background_rows", w.background_rows},
            {"explained_rows", w.explanation.rows()},
            {"train_mse", w.train_mse},
            {"test_mse", w.test_mse},
            {"test_r2", w.test_r2},
            {"phi0", w.explanation.phi0},
            {"fi", NamedVector(features, w.importance.fi)},
            {"degenerate", w.importance.degenerate},
            {"model_file", model_file},
            {"explanation_file", explanation_file}};
  if (w.mlp_report.has_value()) {
    const auto& r = *w.mlp_report;
    j["mlp"] = {{"epochs_run", r.epochs_run},
                {"best_epoch", r.best_epoch},
                {"initial_train_mse", r.initial_train_mse},
                {"final_train_mse", r.final_train_mse},
                {"best_validation_mse", r.best_validation_mse},
                {"validation_r2", r.validation_r2}};
  } else if (const auto* t = std::get_if<gbt::TreeEnsemble>(&w.model)) {
    j["gbt"] = {{"trees", t->trees().size()}, {"max_depth", t->MaxDepth()}};
  }
  return j;
}

absl::Status WritePeriodArtifacts(const experiment::PeriodResult& result,
                                  const PeriodData& data, OutputWriter& out,
                                  json& period_json) {
  json windows = json::array();
  for (const auto& w : result.windows) {
    const std::string model_file = WindowFile("models", result.period_name, w.window_index, ".json");
    const std::string expl_file =
        WindowFile("explanations", result.period_name, w.window_index, ".csv");
    const std::string model_text = std::visit(
        [](const auto& m) {
          if constexpr (std::is_same_v<std::decay_t<decltype(m)>, gbt::TreeEnsemble>) {
            return gbt::SerializeTreeEnsemble(m);
          } else {
            return mlp::SerializeMlpNet(m);
          }
        },
        w.model);
    RETURN_IF_ERROR(out.Write(model_file, model_text));
    ASSIGN_OR_RETURN(const std::string csv,
                     shap::ExplanationToCsv(w.explanation, w.explained_timestamps));
    RETURN_IF_ERROR(out.Write(expl_file, csv));
    windows.push_back(WindowJson(w, data.matrix, result.feature_names, model_file, expl_file));
  }
  period_json["degenerate_windows"] = result.degenerate_windows;
  period_json["fi_mean"] = NamedVector(result.feature_names, result.fi_mean);
  period_json["fi_std"] = NamedVector(result.feature_names, result.fi_std);
  period_json["windows"] = std::move(windows);
  return absl::OkStatus();
}

absl::Status CheckPeriodName(const std::string& name, const std::string& field) {
  const bool ok = !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
  if (!ok) {
    return absl::InvalidArgumentError(absl::StrCat(
        "config: ", field, ": '", name, "' must use only letters, digits, '_' and '-'"));
  }
  return absl::OkStatus();
}

}  // namespace

void Logger::Emit(const char* level, const std::string& message,
                  const char* code) const {
  json line = {{"level", level}, {"command", command_}, {"message", message}};
  if (code != nullptr) line["code"] = code;
  err_ << line.dump() << "\n";
}

void Logger::Info(const std::string& message) const { Emit("info", message, nullptr); }
void Logger::Warn(const std::string& message) const { Emit("warning", message, nullptr); }

void Logger::Error(const absl::Status& status) const {
  const std::string code = absl::StatusCodeToString(status.code());
  Emit("error", std::string(status.message()), code.c_str());
}

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kAlreadyExists:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

absl::Status CmdFeatures(const CommandOptions& options, const Logger& log) {
  ASSIGN_OR_RETURN(const RunConfig config, LoadConfig(options));
  RETURN_IF_ERROR(CheckPeriodName(config.before.name, "periods.before.name"));
  RETURN_IF_ERROR(CheckPeriodName(config.after.name, "periods.after.name"));
  ASSIGN_OR_RETURN(const fs::path out_dir, OutputDir(options, &config));
  ASSIGN_OR_RETURN(const FeatureBuild build, BuildFeatures(config));
  for (const auto& w : build.warnings) log.Warn(w);

  OutputWriter out(out_dir);
  json periods = json::array();
  for (const PeriodData* p : {&build.before, &build.after}) {
    RETURN_IF_ERROR(out.Write(absl::StrCat("features_", p->spec.name, ".csv"),
                              timeseries::FeatureMatrixToCsv(p->matrix)));
    periods.push_back(PeriodJson(*p));
    log.Info(absl::StrCat("period ", p->spec.name, ": ", p->matrix.size(), " rows, ",
                          p->matrix.dropped_rows, " dropped"));
  }
  const json report = {{"version", std::string(kVersion)},
                       {"resolution_hours", build.resolution_hours},
                       {"grid_rows", build.grid_rows},
                       {"features", config.data.features},
                       {"target", config.data.target},
                       {"periods", std::move(periods)},
                       {"warnings", build.warnings}};
  return WriteJson(out_dir / "feature_report.json", report);
}

absl::Status CmdRun(const CommandOptions& options, const Logger& log) {
  ASSIGN_OR_RETURN(RunConfig config, LoadConfig(options));
  RETURN_IF_ERROR(CheckPeriodName(config.before.name, "periods.before.name"));
  RETURN_IF_ERROR(CheckPeriodName(config.after.name, "periods.after.name"));
  ASSIGN_OR_RETURN(const fs::path out_dir, OutputDir(options, &config));
  ASSIGN_OR_RETURN(const FeatureBuild build, BuildFeatures(config));
  for (const auto& w : build.warnings) log.Warn(w);

  experiment::ExperimentConfig exp = config.experiment;
  exp.threads = DefaultThreadCount();
  const uint64_t before_seed = DeriveSeed(config.seed, 0);
  const uint64_t after_seed = DeriveSeed(config.seed, 1);
  log.Info(absl::StrCat("fitting ", experiment::ModelKindName(config.model), " on period ",
                        config.before.name));
  ASSIGN_OR_RETURN(const experiment::PeriodResult before,
                   experiment::RunPeriod(build.before.matrix, build.before.spec,
                                         config.model, exp, before_seed));
  log.Info(absl::StrCat("fitting ", experiment::ModelKindName(config.model), " on period ",
                        config.after.name));
  ASSIGN_OR_RETURN(const experiment::PeriodResult after,
                   experiment::RunPeriod(build.after.matrix, build.after.spec,
                                         config.model, exp, after_seed));
  ASSIGN_OR_RETURN(const experiment::RegimeComparison comparison,
                   experiment::ComparePeriods(before, after));
  for (const auto* p : {&before, &after}) {
    if (p->degenerate_windows > 0) {
      log.Warn(absl::StrCat("period ", p->period_name, ": ", p->degenerate_windows,
                            " window(s) with all-zero SHAP values"));
    }
  }

  OutputWriter out(out_dir);
  const experiment::PeriodResult both[] = {before, after};
  RETURN_IF_ERROR(out.Write("importance.csv", experiment::ImportanceCsv(both)));
  RETURN_IF_ERROR(out.Write("comparison.csv", experiment::ComparisonCsv(comparison)));
  RETURN_IF_ERROR(out.Write("dependence.csv", experiment::DependenceCsv(both)));

  json before_json = PeriodJson(build.before);
  json after_json = PeriodJson(build.after);
  RETURN_IF_ERROR(WritePeriodArtifacts(before, build.before, out, before_json));
  RETURN_IF_ERROR(WritePeriodArtifacts(after, build.after, out, after_json));
  before_json["seed"] = before_seed;
  after_json["seed"] = after_seed;

  json flagged = json::array();
  for (const auto& s : comparison.features) {
    if (s.flagged) flagged.push_back(s.feature);
  }
  const shap::Method engine =
      exp.shap_method.value_or(config.model == experiment::ModelKind::kGbt
                                   ? shap::Method::kTree
                                   : shap::Method::kKernel);
  json outputs = json::array();
  for (const auto& f : out.files()) outputs.push_back(f);
  const json manifest = {
      {"tool", "regime-xai"},
      {"version", std::string(kVersion)},
      {"command", "run"},
      {"config", RunConfigToJson(config)},
      {"overrides", config.overrides},
      {"seed", config.seed},
      {"model", std::string(experiment::ModelKindName(config.model))},
      {"shap_engine", std::string(shap::MethodName(engine))},
      {"data",
       {{"resolution_hours", build.resolution_hours},
        {"grid_rows", build.grid_rows},
        {"warnings", build.warnings}}},
      {"periods", json::array({std::move(before_json), std::move(after_json)})},
      {"comparison",
       {{"before", comparison.before_name},
        {"after", comparison.after_name},
        {"ranked_before", comparison.RankedBefore()},
        {"ranked_after", comparison.RankedAfter()},
        {"flagged", std::move(flagged)}}},
      {"outputs", std::move(outputs)}};
  RETURN_IF_ERROR(WriteJson(out_dir / "manifest.json", manifest));
  log.Info(absl::StrCat("wrote ", out.files().size() + 1, " files to ", out_dir.string()));
  return absl::OkStatus();
}

absl::Status CmdSynth(const CommandOptions& options, const Logger& log) {
  json doc = json::object();
  if (!options.config_path.empty()) {
    ASSIGN_OR_RETURN(const std::string text, timeseries::ReadFile(options.config_path));
    doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config: ", options.config_path, ": expected a JSON object"));
    }
  }
  for (const auto& o : options.overrides) RETURN_IF_ERROR(ApplyOverride(doc, o));

  int rows = 1000;
  uint64_t seed = 0;
  std::string model = "gbt";
  timeseries::SynthRegimeOptions synth;
  for (const auto& [key, value] : doc.items()) {
    auto bad = [&key](const char* what) {
      return absl::InvalidArgumentError(absl::StrCat("config: ", key, ": expected ", what));
    };
    if (key == "rows_per_period") {
      if (!value.is_number_integer()) return bad("an integer");
      rows = value.get<int>();
    } else if (key == "seed") {
      if (!value.is_number_integer() || value.get<int64_t>() < 0) {
        return bad("a non-negative integer");
      }
      seed = value.get<uint64_t>();
    } else if (key == "noise_sigma") {
      if (!value.is_number()) return bad("a number");
      synth.noise_sigma = value.get<double>();
    } else if (key == "resolution_hours") {
      if (!value.is_number_integer()) return bad("an integer");
      synth.resolution_hours = value.get<int>();
    } else if (key == "start") {
      if (!value.is_string()) return bad("a timestamp string");
      auto t = timeseries::ParseTimestamp(value.get<std::string>());
      if (!t.ok()) return absl::InvalidArgumentError(absl::StrCat("config: start: ", t.status().message()));
      synth.start = *t;
    } else if (key == "model") {
      if (!value.is_string()) return bad("\"gbt\" or \"mlp\"");
      model = value.get<std::string>();
    } else {
      return absl::InvalidArgumentError(absl::StrCat("config: ", key, ": unknown key"));
    }
  }
  if (rows < 0) return absl::InvalidArgumentError("config: rows_per_period: must be >= 0");

  ASSIGN_OR_RETURN(const fs::path out_dir, OutputDir(options, nullptr));
  ASSIGN_OR_RETURN(const auto periods,
                   timeseries::SynthRegime(static_cast<size_t>(rows), seed, synth));
  const auto& [a, b] = periods;
  RETURN_IF_ERROR(
      timeseries::WriteTable(timeseries::SynthRegimeTable(a, b), out_dir / "synth.csv"));

  RunConfig config;
  config.seed = seed;
  ASSIGN_OR_RETURN(config.model, experiment::ParseModelKind(model));
  config.output_dir = "results";
  config.data.inputs = {{"synth.csv", synth.resolution_hours}};
  config.data.features = a.feature_names;
  config.data.target = a.target_name;
  config.before = {"A", a.timestamps.front(), b.timestamps.front(), "3*x1 + x2"};
  config.after = {"B", b.timestamps.front(),
                  timeseries::AddHours(b.timestamps.back(), synth.resolution_hours),
                  "x1 + 3*x2"};
  RETURN_IF_ERROR(ValidateRunConfig(config));
  RETURN_IF_ERROR(WriteJson(out_dir / "config.json", RunConfigToJson(config)));
  log.Info(absl::StrCat("wrote ", 2 * rows, " rows to ", (out_dir / "synth.csv").string()));
  return absl::OkStatus();
}

absl::Status CmdVerify(const CommandOptions& options, const VerifyOptions& verify,
                       std::ostream& out, const Logger& log) {
  VerifyOptions effective = verify;
  if (!options.config_path.empty() || !options.overrides.empty()) {
    json doc = json::object();
    if (!options.config_path.empty()) {
      ASSIGN_OR_RETURN(const std::string text, timeseries::ReadFile(options.config_path));
      doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
      if (doc.is_discarded() || !doc.is_object()) {
        return absl::InvalidArgumentError(
            absl::StrCat("config: ", options.config_path, ": expected a JSON object"));
      }
    }
    for (const auto& o : options.overrides) RETURN_IF_ERROR(ApplyOverride(doc, o));
    for (const auto& [key, value] : doc.items()) {
      if (key != "seed") {
        return absl::InvalidArgumentError(absl::StrCat("config: ", key, ": unknown key"));
      }
      if (!value.is_number_integer() || value.get<int64_t>() < 0) {
        return absl::InvalidArgumentError("config: seed: expected a non-negative integer");
      }
      effective.seed = value.get<uint64_t>();
    }
  }

  const std::vector<CheckResult> results = RunVerifySuite(effective);
  json report = json::array();
  std::vector<std::string> failed;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " " << r.detail << "\n";
    report.push_back({{"check", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    if (!r.passed) failed.push_back(r.name);
  }
  if (!options.out_dir.empty()) {
    RETURN_IF_ERROR(WriteJson(fs::path(options.out_dir) / "verify_report.json",
                              {{"version", std::string(kVersion)},
                               {"seed", effective.seed},
                               {"checks", std::move(report)}}));
  }
  if (!failed.empty()) {
    std::string names;
    for (const auto& f : failed) absl::StrAppend(&names, names.empty() ? "" : ", ", f);
    return absl::InternalError(absl::StrCat("verify: failed checks: ", names));
  }
  log.Info(absl::StrCat("all ", results.size(), " checks passed"));
  return absl::OkStatus();
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regime-change analysis of price drivers with SHAP explanations",
               "regime-xai"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    bool needs_config;
  };
  const Sub subs[] = {
      {"features", "Build per-period feature matrices", true},
      {"run", "Fit, explain and compare both periods", true},
      {"verify", "Run the built-in oracle and invariant checks", false},
      {"synth", "Write a synthetic regime-shift dataset and config", false},
  };
  CommandOptions options;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    auto* config = sub->add_option("--config", options.config_path, "JSON config file");
    if (s.needs_config) config->required();
    sub->add_option("--set", options.overrides, "Override a config value: key=value")
        ->expected(1)
        ->take_all();
    sub->add_option("--out", options.out_dir, "Output directory");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const Logger log(err, command);
  absl::Status status;
  if (command == "features") {
    status = CmdFeatures(options, log);
  } else if (command == "run") {
    status = CmdRun(options, log);
  } else if (command == "synth") {
    if (options.out_dir.empty()) options.out_dir = ".";
    status = CmdSynth(options, log);
  } else {
    status = CmdVerify(options, VerifyOptions{}, out, log);
  }
  if (!status.ok()) {
    log.Error(status);
    return ExitCodeFor(status);
  }
  return kExitOk;
}

}  // namespace regime_xai::cli
