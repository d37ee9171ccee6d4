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

#include "cli/run_config.h"

#include <charconv>
#include <limits>
#include <set>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "regime_xai/shap/shap.h"
#include "regime_xai/timeseries/time_table.h"
#include "regime_xai/timeseries/timestamp.h"
#include "regime_xai/utils/status_macros.h"

namespace regime_xai::cli {
namespace {

using nlohmann::json;

absl::Status FieldError(const std::string& path, absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat("config: ", path, ": ", message));
}

// Reads the members of one JSON object, remembering which keys were consumed
// so that leftovers can be reported as unknown.
class ObjectReader {
 public:
  static absl::StatusOr<ObjectReader> Open(const json& node, std::string path) {
    if (!node.is_object()) return FieldError(path, "expected an object");
    return ObjectReader(node, std::move(path));
  }

  std::string PathOf(absl::string_view key) const {
    return path_.empty() ? std::string(key) : absl::StrCat(path_, ".", key);
  }

  const json* Find(const std::string& key) {
    seen_.insert(key);
    const auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
  }

  absl::Status Int(const std::string& key, int* out, bool required = false) {
    const json* v = Find(key);
    if (v == nullptr) return Missing(key, required);
    if (!v->is_number_integer()) return FieldError(PathOf(key), "expected an integer");
    const auto value = v->get<int64_t>();
    if (value < std::numeric_limits<int>::min() ||
        value > std::numeric_limits<int>::max()) {
      return FieldError(PathOf(key), "integer out of range");
    }
    *out = static_cast<int>(value);
    return absl::OkStatus();
  }

  absl::Status Size(const std::string& key, size_t* out) {
    const json* v = Find(key);
    if (v == nullptr) return absl::OkStatus();
    if (!v->is_number_integer() || v->get<int64_t>() < 0) {
      return FieldError(PathOf(key), "expected a non-negative integer");
    }
    *out = v->get<size_t>();
    return absl::OkStatus();
  }

  absl::Status Seed(const std::string& key, uint64_t* out) {
    const json* v = Find(key);
    if (v == nullptr) return absl::OkStatus();
    if (v->is_number_unsigned() ||
        (v->is_number_integer() && v->get<int64_t>() >= 0)) {
      *out = v->get<uint64_t>();
      return absl::OkStatus();
    }
    return FieldError(PathOf(key), "expected a non-negative integer");
  }

  absl::Status Double(const std::string& key, double* out) {
    const json* v = Find(key);
    if (v == nullptr) return absl::OkStatus();
    if (!v->is_number()) return FieldError(PathOf(key), "expected a number");
    *out = v->get<double>();
    return absl::OkStatus();
  }

  absl::Status String(const std::string& key, std::string* out,
                      bool required = false) {
    const json* v = Find(key);
    if (v == nullptr) return Missing(key, required);
    if (!v->is_string()) return FieldError(PathOf(key), "expected a string");
    *out = v->get<std::string>();
    if (required && out->empty()) return FieldError(PathOf(key), "must not be empty");
    return absl::OkStatus();
  }

  absl::Status Strings(const std::string& key, std::vector<std::string>* out,
                       bool required = false) {
    const json* v = Find(key);
    if (v == nullptr) return Missing(key, required);
    if (!v->is_array()) return FieldError(PathOf(key), "expected an array of strings");
    out->clear();
    for (size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_string()) {
        return FieldError(absl::StrCat(PathOf(key), "[", i, "]"), "expected a string");
      }
      out->push_back((*v)[i].get<std::string>());
    }
    return absl::OkStatus();
  }

  absl::Status Ints(const std::string& key, std::vector<int>* out) {
    const json* v = Find(key);
    if (v == nullptr) return absl::OkStatus();
    if (!v->is_array()) return FieldError(PathOf(key), "expected an array of integers");
    out->clear();
    for (size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number_integer()) {
        return FieldError(absl::StrCat(PathOf(key), "[", i, "]"), "expected an integer");
      }
      out->push_back((*v)[i].get<int>());
    }
    return absl::OkStatus();
  }

  absl::Status Timestamp(const std::string& key, timeseries::Instant* out) {
    std::string text;
    RETURN_IF_ERROR(String(key, &text, /*required=*/true));
    auto t = timeseries::ParseTimestamp(text);
    if (!t.ok()) return FieldError(PathOf(key), t.status().message());
    *out = *t;
    return absl::OkStatus();
  }

  // Every key that was never asked for is a typo or an unsupported option.
  absl::Status Finish() const {
    for (const auto& [key, value] : node_->items()) {
      if (!seen_.contains(key)) return FieldError(PathOf(key), "unknown key");
    }
    return absl::OkStatus();
  }

 private:
  ObjectReader(const json& node, std::string path)
      : node_(&node), path_(std::move(path)) {}

  absl::Status Missing(const std::string& key, bool required) const {
    if (required) return FieldError(PathOf(key), "required");
    return absl::OkStatus();
  }

  const json* node_;
  std::string path_;
  std::set<std::string> seen_;
};

// Iterates an optional array of objects at `key`.
template <typename Fn>
absl::Status ForEachObject(ObjectReader& parent, const std::string& key,
                           bool required, Fn fn) {
  const json* v = parent.Find(key);
  if (v == nullptr) {
    if (required) return FieldError(parent.PathOf(key), "required");
    return absl::OkStatus();
  }
  if (!v->is_array()) return FieldError(parent.PathOf(key), "expected an array");
  for (size_t i = 0; i < v->size(); ++i) {
    ASSIGN_OR_RETURN(ObjectReader item,
                     ObjectReader::Open((*v)[i], absl::StrCat(parent.PathOf(key), "[", i, "]")));
    RETURN_IF_ERROR(fn(item));
    RETURN_IF_ERROR(item.Finish());
  }
  return absl::OkStatus();
}

absl::Status ParsePeriod(ObjectReader& r, experiment::PeriodSpec* p) {
  RETURN_IF_ERROR(r.String("name", &p->name, /*required=*/true));
  RETURN_IF_ERROR(r.Timestamp("start", &p->start));
  RETURN_IF_ERROR(r.Timestamp("end", &p->end));
  RETURN_IF_ERROR(r.String("regime", &p->regime));
  if (!(p->start < p->end)) {
    return FieldError(r.PathOf("end"), "must be after start");
  }
  return absl::OkStatus();
}

absl::Status ParseData(ObjectReader& r, DataConfig* d) {
  RETURN_IF_ERROR(ForEachObject(r, "inputs", true, [&](ObjectReader& in) {
    InputSpec spec;
    RETURN_IF_ERROR(in.String("path", &spec.path, true));
    RETURN_IF_ERROR(in.Int("resolution_hours", &spec.resolution_hours, true));
    if (spec.resolution_hours < 1) {
      return FieldError(in.PathOf("resolution_hours"), "must be >= 1");
    }
    d->inputs.push_back(std::move(spec));
    return absl::OkStatus();
  }));
  if (d->inputs.empty()) return FieldError(r.PathOf("inputs"), "needs at least one file");
  RETURN_IF_ERROR(r.Int("resample_hours", &d->resample_hours));
  if (d->resample_hours < 0) {
    return FieldError(r.PathOf("resample_hours"), "must be >= 0");
  }
  RETURN_IF_ERROR(ForEachObject(r, "residual_loads", false, [&](ObjectReader& in) {
    ResidualLoadSpec spec;
    RETURN_IF_ERROR(in.String("name", &spec.name, true));
    RETURN_IF_ERROR(in.String("load", &spec.load, true));
    RETURN_IF_ERROR(in.String("wind", &spec.wind, true));
    RETURN_IF_ERROR(in.String("solar", &spec.solar, true));
    RETURN_IF_ERROR(in.String("ror", &spec.ror, true));
    RETURN_IF_ERROR(in.Int("ror_lag_days", &spec.ror_lag_days));
    if (spec.ror_lag_days < 1) return FieldError(in.PathOf("ror_lag_days"), "must be >= 1");
    d->residual_loads.push_back(std::move(spec));
    return absl::OkStatus();
  }));
  if (const json* mp = r.Find("mixed_price"); mp != nullptr) {
    ASSIGN_OR_RETURN(ObjectReader in, ObjectReader::Open(*mp, r.PathOf("mixed_price")));
    MixedPriceSpec spec;
    RETURN_IF_ERROR(in.String("name", &spec.name, true));
    RETURN_IF_ERROR(in.String("capacity", &spec.capacity, true));
    RETURN_IF_ERROR(in.String("energy", &spec.energy, true));
    RETURN_IF_ERROR(in.Double("alpha", &spec.alpha));
    if (spec.alpha < 0.0) return FieldError(in.PathOf("alpha"), "must be >= 0");
    RETURN_IF_ERROR(in.Finish());
    d->mixed_price = std::move(spec);
  }
  RETURN_IF_ERROR(ForEachObject(r, "moving_averages", false, [&](ObjectReader& in) {
    MovingAverageSpec spec;
    RETURN_IF_ERROR(in.String("name", &spec.name, true));
    RETURN_IF_ERROR(in.String("column", &spec.column, true));
    RETURN_IF_ERROR(in.Int("days", &spec.days));
    if (spec.days < 1) return FieldError(in.PathOf("days"), "must be >= 1");
    d->moving_averages.push_back(std::move(spec));
    return absl::OkStatus();
  }));
  RETURN_IF_ERROR(r.Strings("features", &d->features, true));
  if (d->features.empty()) return FieldError(r.PathOf("features"), "must not be empty");
  std::set<std::string> unique(d->features.begin(), d->features.end());
  if (unique.size() != d->features.size()) {
    return FieldError(r.PathOf("features"), "duplicate feature name");
  }
  RETURN_IF_ERROR(r.String("target", &d->target, true));
  if (unique.contains(d->target)) {
    return FieldError(r.PathOf("target"), "target is also listed as a feature");
  }
  return absl::OkStatus();
}

absl::Status ParseExperiment(ObjectReader& r, experiment::ExperimentConfig* e) {
  RETURN_IF_ERROR(r.Int("n_windows", &e->n_windows));
  RETURN_IF_ERROR(r.Double("window_fraction", &e->window_fraction));
  RETURN_IF_ERROR(r.Int("block_days", &e->block_days));
  RETURN_IF_ERROR(r.Double("test_fraction", &e->test_fraction));
  std::string rows = e->explain_test_rows ? "test" : "train";
  RETURN_IF_ERROR(r.String("explain_rows", &rows));
  if (rows != "test" && rows != "train") {
    return FieldError(r.PathOf("explain_rows"), "expected \"test\" or \"train\"");
  }
  e->explain_test_rows = rows == "test";
  return absl::OkStatus();
}

absl::Status ParseShap(ObjectReader& r, experiment::ExperimentConfig* e) {
  std::string engine = "auto";
  RETURN_IF_ERROR(r.String("engine", &engine));
  if (engine == "auto") {
    e->shap_method.reset();
  } else {
    auto method = shap::ParseMethod(engine);
    if (!method.ok()) return FieldError(r.PathOf("engine"), method.status().message());
    e->shap_method = *method;
  }
  RETURN_IF_ERROR(r.Size("background_size", &e->background_size));
  RETURN_IF_ERROR(r.Size("coalition_budget", &e->coalition_budget));
  return absl::OkStatus();
}

absl::Status ParseGbt(ObjectReader& r, gbt::GbtParams* p) {
  RETURN_IF_ERROR(r.Int("n_trees", &p->n_trees));
  RETURN_IF_ERROR(r.Int("max_depth", &p->max_depth));
  RETURN_IF_ERROR(r.Int("min_samples_leaf", &p->min_samples_leaf));
  RETURN_IF_ERROR(r.Double("learning_rate", &p->learning_rate));
  return absl::OkStatus();
}

absl::Status ParseMlp(ObjectReader& r, mlp::MlpParams* p) {
  RETURN_IF_ERROR(r.Ints("hidden_sizes", &p->hidden_sizes));
  RETURN_IF_ERROR(r.Int("max_epochs", &p->max_epochs));
  RETURN_IF_ERROR(r.Int("batch_size", &p->batch_size));
  RETURN_IF_ERROR(r.Double("step_size", &p->step_size));
  RETURN_IF_ERROR(r.Int("early_stop_patience", &p->early_stop_patience));
  RETURN_IF_ERROR(r.Double("validation_fraction", &p->validation_fraction));
  return absl::OkStatus();
}

template <typename Fn>
absl::Status OptionalSection(ObjectReader& parent, const std::string& key, Fn fn) {
  const json* v = parent.Find(key);
  if (v == nullptr) return absl::OkStatus();
  ASSIGN_OR_RETURN(ObjectReader r, ObjectReader::Open(*v, parent.PathOf(key)));
  RETURN_IF_ERROR(fn(r));
  return r.Finish();
}

template <typename Fn>
absl::Status RequiredSection(ObjectReader& parent, const std::string& key, Fn fn) {
  if (parent.Find(key) == nullptr) return FieldError(parent.PathOf(key), "required");
  return OptionalSection(parent, key, fn);
}

// Re-labels a library validation error as a config error on `path`.
absl::Status Annotate(const absl::Status& status, const std::string& path) {
  if (status.ok()) return status;
  return FieldError(path, status.message());
}

}  // namespace

std::filesystem::path RunConfig::ResolveInput(const std::string& path) const {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : base_dir / p;
}

absl::Status ApplyOverride(nlohmann::json& doc, absl::string_view assignment) {
  const size_t eq = assignment.find('=');
  if (eq == absl::string_view::npos || eq == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("--set expects key=value, got '", assignment, "'"));
  }
  const absl::string_view key = assignment.substr(0, eq);
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = raw;

  json* node = &doc;
  const std::vector<absl::string_view> parts = absl::StrSplit(key, '.');
  for (size_t i = 0; i < parts.size(); ++i) {
    const absl::string_view part = parts[i];
    if (part.empty()) {
      return absl::InvalidArgumentError(absl::StrCat("--set: empty segment in '", key, "'"));
    }
    if (node->is_array()) {
      size_t index = 0;
      const auto res = std::from_chars(part.data(), part.data() + part.size(), index);
      if (res.ec != std::errc() || res.ptr != part.data() + part.size() ||
          index >= node->size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "--set: '", part, "' is not a valid index in '", key, "'"));
      }
      node = &(*node)[index];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) {
        return absl::InvalidArgumentError(
            absl::StrCat("--set: '", key, "' descends into a non-object value"));
      }
      node = &(*node)[std::string(part)];
    }
  }
  *node = std::move(value);
  return absl::OkStatus();
}

absl::StatusOr<RunConfig> ParseRunConfig(const nlohmann::json& doc) {
  RunConfig c;
  ASSIGN_OR_RETURN(ObjectReader root, ObjectReader::Open(doc, ""));
  RETURN_IF_ERROR(root.Seed("seed", &c.seed));
  std::string model = "gbt";
  RETURN_IF_ERROR(root.String("model", &model));
  auto kind = experiment::ParseModelKind(model);
  if (!kind.ok()) return FieldError("model", kind.status().message());
  c.model = *kind;
  RETURN_IF_ERROR(root.String("output_dir", &c.output_dir));
  RETURN_IF_ERROR(RequiredSection(root, "data", [&](ObjectReader& r) {
    return ParseData(r, &c.data);
  }));
  RETURN_IF_ERROR(RequiredSection(root, "periods", [&](ObjectReader& r) {
    RETURN_IF_ERROR(RequiredSection(r, "before", [&](ObjectReader& p) {
      return ParsePeriod(p, &c.before);
    }));
    return RequiredSection(r, "after", [&](ObjectReader& p) {
      return ParsePeriod(p, &c.after);
    });
  }));
  RETURN_IF_ERROR(OptionalSection(root, "experiment", [&](ObjectReader& r) {
    return ParseExperiment(r, &c.experiment);
  }));
  RETURN_IF_ERROR(OptionalSection(root, "shap", [&](ObjectReader& r) {
    return ParseShap(r, &c.experiment);
  }));
  RETURN_IF_ERROR(OptionalSection(root, "gbt", [&](ObjectReader& r) {
    return ParseGbt(r, &c.experiment.gbt);
  }));
  RETURN_IF_ERROR(OptionalSection(root, "mlp", [&](ObjectReader& r) {
    return ParseMlp(r, &c.experiment.mlp);
  }));
  RETURN_IF_ERROR(root.Finish());
  RETURN_IF_ERROR(ValidateRunConfig(c));
  return c;
}

absl::Status ValidateRunConfig(const RunConfig& c) {
  if (c.before.name == c.after.name) {
    return FieldError("periods.after.name", "must differ from periods.before.name");
  }
  if (c.after.start < c.before.end) {
    return FieldError("periods.after.start",
                      "periods overlap; before.end must be <= after.start");
  }
  RETURN_IF_ERROR(Annotate(c.experiment.gbt.Validate(), "gbt"));
  RETURN_IF_ERROR(Annotate(c.experiment.mlp.Validate(), "mlp"));
  RETURN_IF_ERROR(Annotate(c.experiment.Validate(), "experiment"));
  if (c.model == experiment::ModelKind::kMlp &&
      c.experiment.shap_method == shap::Method::kTree) {
    return FieldError("shap.engine", "the tree engine requires model \"gbt\"");
  }
  return absl::OkStatus();
}

absl::StatusOr<RunConfig> LoadRunConfig(const std::filesystem::path& path,
                                        const std::vector<std::string>& overrides) {
  ASSIGN_OR_RETURN(const std::string text, timeseries::ReadFile(path));
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError(
        absl::StrCat("config: ", path.string(), ": not valid JSON"));
  }
  for (const std::string& o : overrides) RETURN_IF_ERROR(ApplyOverride(doc, o));
  ASSIGN_OR_RETURN(RunConfig config, ParseRunConfig(doc));
  config.base_dir = path.parent_path();
  config.overrides = overrides;
  return config;
}

nlohmann::json RunConfigToJson(const RunConfig& c) {
  json data;
  data["inputs"] = json::array();
  for (const auto& in : c.data.inputs) {
    data["inputs"].push_back({{"path", in.path}, {"resolution_hours", in.resolution_hours}});
  }
  data["resample_hours"] = c.data.resample_hours;
  data["residual_loads"] = json::array();
  for (const auto& rl : c.data.residual_loads) {
    data["residual_loads"].push_back({{"name", rl.name},
                                      {"load", rl.load},
                                      {"wind", rl.wind},
                                      {"solar", rl.solar},
                                      {"ror", rl.ror},
                                      {"ror_lag_days", rl.ror_lag_days}});
  }
  if (c.data.mixed_price.has_value()) {
    const auto& mp = *c.data.mixed_price;
    data["mixed_price"] = {{"name", mp.name},
                           {"capacity", mp.capacity},
                           {"energy", mp.energy},
                           {"alpha", mp.alpha}};
  }
  data["moving_averages"] = json::array();
  for (const auto& ma : c.data.moving_averages) {
    data["moving_averages"].push_back(
        {{"name", ma.name}, {"column", ma.column}, {"days", ma.days}});
  }
  data["features"] = c.data.features;
  data["target"] = c.data.target;

  auto period = [](const experiment::PeriodSpec& p) {
    json j = {{"name", p.name},
              {"start", timeseries::FormatTimestamp(p.start)},
              {"end", timeseries::FormatTimestamp(p.end)}};
    if (!p.regime.empty()) j["regime"] = p.regime;
    return j;
  };
  const auto& e = c.experiment;
  json doc;
  doc["seed"] = c.seed;
  doc["model"] = std::string(experiment::ModelKindName(c.model));
  if (!c.output_dir.empty()) doc["output_dir"] = c.output_dir;
  doc["data"] = std::move(data);
  doc["periods"] = {{"before", period(c.before)}, {"after", period(c.after)}};
  doc["experiment"] = {{"n_windows", e.n_windows},
                       {"window_fraction", e.window_fraction},
                       {"block_days", e.block_days},
                       {"test_fraction", e.test_fraction},
                       {"explain_rows", e.explain_test_rows ? "test" : "train"}};
  doc["shap"] = {{"engine", e.shap_method.has_value()
                                ? std::string(shap::MethodName(*e.shap_method))
                                : std::string("auto")},
                 {"background_size", e.background_size},
                 {"coalition_budget", e.coalition_budget}};
  doc["gbt"] = {{"n_trees", e.gbt.n_trees},
                {"max_depth", e.gbt.max_depth},
                {"min_samples_leaf", e.gbt.min_samples_leaf},
                {"learning_rate", e.gbt.learning_rate}};
  doc["mlp"] = {{"hidden_sizes", e.mlp.hidden_sizes},
                {"max_epochs", e.mlp.max_epochs},
                {"batch_size", e.mlp.batch_size},
                {"step_size", e.mlp.step_size},
                {"early_stop_patience", e.mlp.early_stop_patience},
                {"validation_fraction", e.mlp.validation_fraction}};
  return doc;
}

}  // namespace regime_xai::cli
