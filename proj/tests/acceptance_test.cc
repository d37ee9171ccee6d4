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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "cli/commands.h"
#include "cli/random_models.h"
#include "regime_xai/experiment/experiment.h"
#include "regime_xai/gbt/gbt.h"
#include "regime_xai/mlp/mlp.h"
#include "regime_xai/shap/shap.h"
#include "regime_xai/timeseries/feature_engineering.h"
#include "regime_xai/timeseries/time_table.h"
#include "regime_xai/utils/number_format.h"
#include "regime_xai/utils/random.h"

namespace regime_xai {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool passed = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// Regression data with a dummy column: y depends on columns 0..2 only.
struct Data {
  DenseMatrix x;
  std::vector<double> y;
};

Data RandomRegression(Rng& rng, size_t rows, size_t cols) {
  Data d{cli::RandomMatrix(rng, rows, cols), std::vector<double>(rows)};
  const double a = rng.Normal(), b = rng.Normal(), c = rng.Normal();
  for (size_t r = 0; r < rows; ++r) {
    d.y[r] = a * d.x(r, 0) + b * std::sin(2 * d.x(r, 1)) +
             c * d.x(r, 0) * d.x(r, 2) + 0.2 * rng.Normal();
  }
  return d;
}

double LocalAccuracyError(const shap::Explanation& e) {
  double worst = 0.0;
  for (size_t r = 0; r < e.rows(); ++r) {
    double total = e.phi0;
    for (size_t j = 0; j < e.phi.cols(); ++j) total += e.phi(r, j);
    worst = std::max(worst, std::abs(total - e.predictions[r]));
  }
  return worst;
}

Outcome LocalAccuracy() {
  const auto start = Clock::now();
  Rng rng(101);
  double worst = 0.0;
  size_t rows = 0;
  for (int m = 0; m < 10; ++m) {
    const Data d = RandomRegression(rng, 300, 5);
    gbt::GbtParams p;
    p.n_trees = 50;
    auto fit = gbt::FitGbt(d.x, d.y, p);
    if (!fit.ok()) return {false, std::string(fit.status().message())};
    const auto model = shap::Model::FromTreeEnsemble(*fit);
    auto bg = shap::Background::Subsample(d.x, 50, m);
    const DenseMatrix x = cli::RandomMatrix(rng, 60, 5);
    auto e = shap::ExplainDataset(model, x, *bg, {});
    if (!e.ok()) return {false, std::string(e.status().message())};
    // Recompute f(x) here rather than trusting the stored predictions.
    e->predictions = model.Predict(x);
    worst = std::max(worst, LocalAccuracyError(*e));
    rows += x.rows();
  }
  for (int m = 0; m < 10; ++m) {
    const auto model = shap::Model::FromMlp(cli::RandomMlp(rng, {6, 16, 8, 1}));
    auto bg = shap::Background::Create(cli::RandomMatrix(rng, 10, 6));
    const DenseMatrix x = cli::RandomMatrix(rng, 50, 6);
    shap::ExplainOptions opt;
    opt.method = shap::Method::kKernel;
    opt.seed = m;
    auto e = shap::ExplainDataset(model, x, *bg, opt);
    if (!e.ok()) return {false, std::string(e.status().message())};
    e->predictions = model.Predict(x);
    worst = std::max(worst, LocalAccuracyError(*e));
    rows += x.rows();
  }
  const double secs = Seconds(start);
  return {rows >= 1000 && worst < 1e-6 && secs < 60.0,
          absl::StrFormat("max |phi0 + sum(phi) - f(x)| = %.3g over %d rows (< 1e-6), %.1fs (< 60s)",
                          worst, rows, secs)};
}

Outcome TreeOracle() {
  const auto start = Clock::now();
  Rng rng(202);
  double worst = 0.0;
  int max_depth = 0;
  for (int m = 0; m < 50; ++m) {
    const auto e = cli::RandomTreeEnsemble(rng, 6, 3, 1 + rng.UniformIndex(10));
    max_depth = std::max(max_depth, e.MaxDepth());
    const auto model = shap::Model::FromTreeEnsemble(e);
    auto bg = shap::Background::Create(cli::RandomMatrix(rng, 5, 6));
    const DenseMatrix x = cli::RandomMatrix(rng, 50, 6);
    for (size_t r = 0; r < x.rows(); ++r) {
      auto t = shap::TreeShap(e, x.Row(r), *bg);
      auto ex = shap::ExactShap(model, x.Row(r), *bg);
      if (!t.ok() || !ex.ok()) return {false, "engine error"};
      for (size_t j = 0; j < 6; ++j) worst = std::max(worst, std::abs(t->phi[j] - ex->phi[j]));
    }
  }
  const double secs = Seconds(start);
  return {worst < 1e-9 && max_depth <= 3 && secs < 120.0,
          absl::StrFormat("max |tree - exact| = %.3g over 50 ensembles x 50 rows (< 1e-9), "
                          "%.1fs (< 120s)",
                          worst, secs)};
}

Outcome KernelExactMode() {
  const auto start = Clock::now();
  Rng rng(303);
  double worst = 0.0;
  for (int m = 0; m < 10; ++m) {
    const auto model = shap::Model::FromMlp(cli::RandomMlp(rng, {8, 12, 1}));
    auto bg = shap::Background::Create(cli::RandomMatrix(rng, 5, 8));
    const DenseMatrix x = cli::RandomMatrix(rng, 10, 8);
    shap::KernelShapOptions opt;
    opt.n_coalitions = 254;  // all proper non-empty coalitions of 8 features
    for (size_t r = 0; r < x.rows(); ++r) {
      auto k = shap::KernelShap(model, x.Row(r), *bg, opt);
      auto ex = shap::ExactShap(model, x.Row(r), *bg);
      if (!k.ok() || !ex.ok()) return {false, "engine error"};
      for (size_t j = 0; j < 8; ++j) worst = std::max(worst, std::abs(k->phi[j] - ex->phi[j]));
    }
  }
  const double secs = Seconds(start);
  return {worst < 1e-6 && secs < 120.0,
          absl::StrFormat("max |kernel - exact| = %.3g, n=8 (< 1e-6), %.1fs (< 120s)", worst,
                          secs)};
}

Outcome ImportanceNormalization() {
  Rng rng(404);
  double worst = 0.0;
  double dummy_max = 0.0;
  int checked = 0;
  for (int m = 0; m < 10; ++m) {
    Data d = RandomRegression(rng, 200, 4);
    for (size_t r = 0; r < d.x.rows(); ++r) d.x(r, 3) = 1.5;  // dummy column
    gbt::GbtParams p;
    p.n_trees = 40;
    auto fit = gbt::FitGbt(d.x, d.y, p);
    if (!fit.ok()) return {false, std::string(fit.status().message())};
    auto bg = shap::Background::Subsample(d.x, 30, m);
    auto e = shap::ExplainDataset(shap::Model::FromTreeEnsemble(*fit), d.x, *bg, {});
    if (!e.ok()) return {false, std::string(e.status().message())};
    auto fi = shap::FeatureImportance(*e);
    if (!fi.ok() || fi->degenerate) return {false, "unexpected degenerate importance"};
    worst = std::max(worst, std::abs(std::accumulate(fi->fi.begin(), fi->fi.end(), 0.0) - 1));
    dummy_max = std::max(dummy_max, fi->fi[3]);
    ++checked;
  }
  for (int m = 0; m < 10; ++m) {
    const auto model = shap::Model::FromMlp(cli::RandomMlp(rng, {5, 8, 1}));
    auto bg = shap::Background::Create(cli::RandomMatrix(rng, 8, 5));
    shap::ExplainOptions opt;
    opt.method = shap::Method::kKernel;
    auto e = shap::ExplainDataset(model, cli::RandomMatrix(rng, 30, 5), *bg, opt);
    if (!e.ok()) return {false, std::string(e.status().message())};
    auto fi = shap::FeatureImportance(*e);
    if (!fi.ok()) return {false, std::string(fi.status().message())};
    if (fi->degenerate) continue;
    worst = std::max(worst, std::abs(std::accumulate(fi->fi.begin(), fi->fi.end(), 0.0) - 1));
    ++checked;
  }
  return {worst <= 1e-9 && dummy_max == 0.0,
          absl::StrFormat("max |sum(FI) - 1| = %.3g over %d vectors (<= 1e-9), dummy FI = %g "
                          "(== 0)",
                          worst, checked, dummy_max)};
}

Outcome GradientCheck() {
  Rng rng(505);
  double worst = 0.0;
  for (int m = 0; m < 20; ++m) {
    const int in = 2 + static_cast<int>(rng.UniformIndex(5));
    std::vector<int> sizes = {in};
    const int hidden_layers = 1 + static_cast<int>(rng.UniformIndex(2));
    for (int h = 0; h < hidden_layers; ++h) sizes.push_back(3 + rng.UniformIndex(6));
    sizes.push_back(1);
    const auto net = cli::RandomMlp(rng, sizes);
    const size_t rows = 4 + rng.UniformIndex(12);
    const DenseMatrix x = cli::RandomMatrix(rng, rows, in);
    std::vector<double> y(rows);
    for (double& v : y) v = rng.Normal();
    auto err = mlp::GradCheck(net, x, y, 1e-5);
    if (!err.ok()) return {false, std::string(err.status().message())};
    worst = std::max(worst, *err);
  }
  return {worst < 1e-4,
          absl::StrFormat("max relative error = %.3g over 20 nets at eps=1e-5 (< 1e-4)", worst)};
}

Outcome GbtMonotoneLoss() {
  Rng rng(606);
  int violations = 0;
  size_t stages = 0;
  for (int m = 0; m < 20; ++m) {
    const Data d = RandomRegression(rng, 100 + rng.UniformIndex(200), 2 + rng.UniformIndex(5));
    gbt::GbtParams p;
    p.n_trees = 100;
    p.max_depth = 1 + static_cast<int>(rng.UniformIndex(4));
    p.min_samples_leaf = 1 + static_cast<int>(rng.UniformIndex(20));
    p.learning_rate = rng.Uniform(0.05, 1.0);
    auto fit = gbt::FitGbt(d.x, d.y, p);
    if (!fit.ok()) return {false, std::string(fit.status().message())};
    double prev = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k <= fit->trees().size(); ++k) {
      const auto pred = fit->Prefix(k).PredictBatch(d.x);
      double mse = 0.0;
      for (size_t r = 0; r < d.y.size(); ++r) mse += (pred[r] - d.y[r]) * (pred[r] - d.y[r]);
      mse /= static_cast<double>(d.y.size());
      if (mse > prev) ++violations;
      prev = mse;
      ++stages;
    }
  }
  return {violations == 0, absl::StrFormat("%d increases over %d stages on 20 datasets",
                                           violations, stages)};
}

// Runs the synth + run commands end to end and reads back comparison.csv.
struct Comparison {
  std::map<std::string, std::vector<double>> rows;  // before_mean .. delta
  std::map<std::string, bool> flagged;
};

absl::StatusOr<Comparison> ReadComparison(const fs::path& path) {
  auto text = timeseries::ReadFile(path);
  if (!text.ok()) return text.status();
  Comparison c;
  bool header = true;
  for (absl::string_view line : absl::StrSplit(*text, '\n', absl::SkipEmpty())) {
    if (header) {
      header = false;
      continue;
    }
    const std::vector<std::string> cells = absl::StrSplit(line, ',');
    if (cells.size() != 7) return absl::InternalError("malformed comparison.csv");
    std::vector<double> values;
    for (size_t i = 1; i < 6; ++i) {
      const auto v = ParseFiniteDouble(cells[i]);
      if (!v) return absl::InternalError("malformed number in comparison.csv");
      values.push_back(*v);
    }
    c.rows[cells[0]] = values;
    c.flagged[cells[0]] = cells[6] == "true";
  }
  return c;
}

absl::Status SynthAndRun(const fs::path& dir, uint64_t seed, const std::string& kind,
                         const fs::path& out) {
  std::ostringstream sink;
  cli::CommandOptions synth;
  synth.out_dir = dir.string();
  synth.overrides = {absl::StrCat("seed=", seed), "model=" + kind};
  if (auto st = cli::CmdSynth(synth, cli::Logger(sink, "synth")); !st.ok()) return st;
  cli::CommandOptions run;
  run.config_path = (dir / "config.json").string();
  run.out_dir = out.string();
  return cli::CmdRun(run, cli::Logger(sink, "run"));
}

std::string Top(const Comparison& c, size_t column) {
  std::string best;
  double best_v = -1.0;
  for (const auto& [name, v] : c.rows) {
    if (v[column] > best_v) {
      best_v = v[column];
      best = name;
    }
  }
  return best;
}

Outcome SynthRegimeShift(const fs::path& scratch) {
  std::vector<std::string> parts;
  bool all = true;
  for (const std::string kind : {"gbt", "mlp"}) {
    const auto start = Clock::now();
    int ok = 0;
    std::vector<uint64_t> failed;
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      const fs::path dir = scratch / absl::StrCat("synth_", kind, "_", seed);
      fs::remove_all(dir);
      if (auto st = SynthAndRun(dir, seed, kind, dir / "out"); !st.ok()) {
        return {false, absl::StrCat(kind, " seed ", seed, ": ", st.message())};
      }
      auto c = ReadComparison(dir / "out" / "comparison.csv");
      if (!c.ok()) return {false, std::string(c.status().message())};
      const auto& x1 = c->rows["x1"];
      const auto& x2 = c->rows["x2"];
      const auto& x3 = c->rows["x3"];
      const bool flip = Top(*c, 0) == "x1" && Top(*c, 2) == "x2";
      const bool shifts = c->flagged["x1"] && c->flagged["x2"] && x1[4] < 0 && x2[4] > 0;
      const bool dummy = x3[0] < 0.05 && x3[2] < 0.05 && !c->flagged["x3"];
      if (flip && shifts && dummy) {
        ++ok;
      } else {
        failed.push_back(seed);
      }
      fs::remove_all(dir);
    }
    const double secs = Seconds(start);
    const bool pass = ok >= 9 && secs < 600.0;
    all = all && pass;
    std::string note = absl::StrFormat("%s %d/10 seeds (>= 9), %.0fs (< 600s)", kind, ok, secs);
    if (!failed.empty()) {
      absl::StrAppend(&note, " failed seeds:");
      for (uint64_t s : failed) absl::StrAppend(&note, " ", s);
    }
    parts.push_back(note);
  }
  return {all, absl::StrJoin(parts, "; ")};
}

Outcome Determinism(const fs::path& scratch) {
  const fs::path dir = scratch / "determinism";
  fs::remove_all(dir);
  for (const char* out : {"run1", "run2"}) {
    if (auto st = SynthAndRun(dir, 42, "gbt", dir / out); !st.ok()) {
      return {false, std::string(st.message())};
    }
  }
  int compared = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / "run1")) {
    if (!e.is_regular_file() || e.path().extension() != ".csv") continue;
    const fs::path rel = fs::relative(e.path(), dir / "run1");
    auto a = timeseries::ReadFile(e.path());
    auto b = timeseries::ReadFile(dir / "run2" / rel);
    if (!a.ok() || !b.ok() || *a != *b) {
      return {false, absl::StrCat(rel.string(), " differs between runs")};
    }
    ++compared;
  }
  fs::remove_all(dir);
  return {compared >= 4, absl::StrFormat("%d CSV files byte-identical across two runs", compared)};
}

Outcome SplitIntegrity() {
  Rng rng(909);
  int bad = 0;
  const int cases = 1000;
  for (int c = 0; c < cases; ++c) {
    const size_t rows_per_day = std::vector<size_t>{1, 6, 24}[rng.UniformIndex(3)];
    const size_t block = 4 * rows_per_day;
    const size_t len = 5 * block + rng.UniformIndex(60 * block);
    const size_t begin = rng.UniformIndex(10000);
    auto plan = experiment::SplitBlocks({begin, begin + len}, block, 0.2, rng.NextU64());
    if (!plan.ok()) {
      ++bad;
      continue;
    }
    std::vector<bool> seen(len, false);
    bool ok = true;
    for (size_t r : plan->train_rows) seen[r - begin] = true;
    for (size_t r : plan->test_rows) {
      ok = ok && !seen[r - begin];  // disjoint
      seen[r - begin] = true;
    }
    ok = ok && std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
    // Whole blocks: every test row's block is entirely test.
    std::vector<size_t> per_block(plan->n_blocks + 1, 0);
    for (size_t r : plan->test_rows) ++per_block[(r - begin) / block];
    for (size_t b = 0; b < per_block.size(); ++b) {
      ok = ok && (per_block[b] == 0 || (per_block[b] == block && b < plan->n_blocks));
    }
    const double frac = static_cast<double>(plan->test_rows.size()) / static_cast<double>(len);
    ok = ok && std::abs(frac - 0.2) <= static_cast<double>(block) / static_cast<double>(len);
    if (!ok) ++bad;
  }
  return {bad == 0, absl::StrFormat("%d of %d random windows violate the split rules", bad, cases)};
}

Outcome MixedPriceArithmetic() {
  Rng rng(1010);
  int mismatches = 0;
  int identity_mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    const double cap = rng.Uniform(0, 50);
    const double energy = rng.Uniform(-500, 3000);
    const double alpha = rng.Uniform(0, 0.1);
    const std::vector<double> c = {cap}, e = {energy};
    auto mixed = timeseries::MixedPrice({c, e, alpha});
    auto zero = timeseries::MixedPrice({c, e, 0.0});
    if (!mixed.ok() || !zero.ok()) return {false, "MixedPrice failed"};
    if (mixed->values[0] != cap + alpha * energy) ++mismatches;
    if (zero->values[0] != cap) ++identity_mismatches;
  }
  return {mismatches == 0 && identity_mismatches == 0,
          absl::StrFormat("%d of 100 triples differ from cap + alpha*energy; alpha=0 identity "
                          "mismatches: %d",
                          mismatches, identity_mismatches)};
}

int Main() {
  const fs::path scratch = fs::temp_directory_path() / "regime_xai_acceptance";
  fs::create_directories(scratch);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"local_accuracy", LocalAccuracy},
      {"tree_shap_oracle", TreeOracle},
      {"kernel_shap_exact_mode", KernelExactMode},
      {"importance_normalization", ImportanceNormalization},
      {"gradient_check", GradientCheck},
      {"gbt_monotone_loss", GbtMonotoneLoss},
      {"synthetic_regime_shift", [&] { return SynthRegimeShift(scratch); }},
      {"run_determinism", [&] { return Determinism(scratch); }},
      {"split_integrity", SplitIntegrity},
      {"mixed_price", MixedPriceArithmetic},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const Outcome o = criteria[i].second();
    if (!o.passed) ++failures;
    std::printf("%s %zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace regime_xai

int main() { return regime_xai::Main(); }
