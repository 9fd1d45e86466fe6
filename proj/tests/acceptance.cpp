/*
 * Copyright 2026 The doubtset Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes. Criteria 6 and 11 drive the command-line tool.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doubtset/bounds.hpp"
#include "doubtset/csv.hpp"
#include "doubtset/data.hpp"
#include "doubtset/geometry.hpp"
#include "doubtset/harness.hpp"
#include "doubtset/model.hpp"
#include "doubtset/random.hpp"
#include "doubtset/selection.hpp"

namespace fs = std::filesystem;
using namespace doubtset;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

FeatureMatrix random_matrix(std::size_t rows, std::size_t dims, Rng& rng) {
  std::vector<double> data(rows * dims);
  for (double& v : data) v = rng.uniform(-1.0, 1.0);
  return FeatureMatrix(rows, dims, std::move(data));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path& work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "doubtset_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd = std::string("\"") + DOUBTSET_CLI_PATH + "\" " + args + " > \"" +
                          stdout_file.string() + "\" 2>&1";
  return std::system(cmd.c_str());
}

// 1. Tiled radii against the full distance matrix.
Outcome tiled_radii() {
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(500), m = 1 + rng.below(500), d = 1 + rng.below(32);
    auto x_u = random_matrix(n, d, rng);
    auto x_l = random_matrix(m, d, rng);
    std::vector<double> naive(n, INFINITY);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += (x_u.at(i, k) - x_l.at(j, k)) * (x_u.at(i, k) - x_l.at(j, k));
        naive[i] = std::fmin(naive[i], std::sqrt(s));
      }
    for (std::size_t b : {std::size_t{1}, std::size_t{7}, std::size_t{64}, n}) {
      const auto tiled = compute_min_delta(x_u, x_l, b);
      for (std::size_t i = 0; i < n; ++i) {
        const double scale = std::max(std::abs(tiled[i]), std::abs(naive[i]));
        if (scale > 0.0) worst = std::max(worst, std::abs(tiled[i] - naive[i]) / scale);
      }
    }
  }
  return {worst <= 1e-9, fmt("100 instances x 4 tile sizes, max relative deviation %.2e", worst)};
}

// 2. Greedy radius within twice the exhaustive optimum.
Outcome two_approximation() {
  Rng rng(202);
  double worst_ratio = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(12), d = 1 + rng.below(4);
    const std::size_t b = rng.below(std::min<std::size_t>(n, 3) + 1);
    auto x_u = random_matrix(n, d, rng);
    auto x_l = random_matrix(1 + rng.below(4), d, rng);
    const double greedy = radius_after(x_u, x_l, greedy_coreset(x_u, x_l, b).order);
    const double opt = optimal_coreset(x_u, x_l, b).radius;
    ok = ok && greedy <= 2.0 * opt + 1e-9;
    if (opt > 0.0) worst_ratio = std::max(worst_ratio, greedy / opt);
  }
  return {ok, fmt("200 instances, worst greedy/optimal radius ratio %.3f", worst_ratio)};
}

// 3. Uniform doubt reduces to greedy; a one-wide beam reduces to doubted.
Outcome reductions() {
  Rng rng(303);
  std::size_t mismatches = 0, checks = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(60), d = 1 + rng.below(8);
    auto x_u = random_matrix(n, d, rng);
    auto x_l = random_matrix(1 + rng.below(8), d, rng);
    const std::size_t b = rng.below(n + 1);
    const auto greedy = greedy_coreset(x_u, x_l, b).order;
    std::vector<double> doubts(n);
    for (double& v : doubts) v = rng.uniform(0.0, 0.99);
    for (auto mode : {ScalingMode::kAcquiredPoint, ScalingMode::kCandidatePoint}) {
      for (double c : {0.1, 0.5, 0.9}) {
        const std::vector<double> uniform(n, c);
        mismatches += doubted_coreset(x_u, x_l, uniform, b, kDefaultDistanceBatch, mode).order != greedy;
        ++checks;
      }
      const auto doubted = doubted_coreset(x_u, x_l, doubts, b, kDefaultDistanceBatch, mode);
      const auto beam = beam_doubted_coreset(x_u, x_l, doubts, b, 1, kDefaultDistanceBatch, mode);
      mismatches += beam.selection.order != doubted.order;
      ++checks;
    }
  }
  return {mismatches == 0, fmt("%.0f comparisons, %.0f mismatches", double(checks), double(mismatches))};
}

// 4. Beam candidates ranked by non-increasing uncertainty on quadrant pools.
Outcome beam_ranking() {
  std::size_t runs = 0;
  bool ok = true;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto data = gen_quadrants(600, seed);
    auto parts = split(data, SplitSpec{60, 0.25, seed});
    auto x_l = data.features.select(parts.labeled);
    auto x_u = data.features.select(parts.unlabeled);
    std::vector<int> y;
    for (auto i : parts.labeled) y.push_back(data.labels[i]);
    auto model = train(x_l, y, 4, TrainConfig{});
    const auto doubts = doubt(model.predict_proba(x_u));
    for (std::size_t k : {2, 4, 10}) {
      auto r = beam_doubted_coreset(x_u, x_l, doubts, 20, k);
      double best = 0.0;
      for (const auto& c : r.ranked) best = std::max(best, c.score);
      ok = ok && !r.ranked.empty() && r.ranked.front().score == best &&
           r.selection.order == r.ranked.front().selected;
      for (std::size_t i = 1; i < r.ranked.size(); ++i) ok = ok && r.ranked[i - 1].score >= r.ranked[i].score;
      ++runs;
    }
  }
  return {ok, fmt("%.0f beam runs (K = 2, 4, 10; budget 20)", double(runs))};
}

// 5. Numerical verification of the bound derivations plus spot values.
Outcome theory() {
  const auto report = verify_claims(VerifyOptions{});
  const double spot_beta = std::abs(beta_scaled(0.5, 0.5, 1.0, 1.0) - (1.0 - std::exp(-0.5)));
  const double spot_star = std::abs(delta_star(0.5, 1.0, 1.0) - std::numbers::e / 2.0);
  std::string detail;
  for (const auto& c : report.claims)
    detail += c.name + fmt("=%.1e/%.0e ", c.max_deviation, c.tolerance);
  detail += fmt("spot beta %.1e, spot delta* %.1e", spot_beta, spot_star);
  return {report.all_passed() && spot_beta <= 1e-9 && spot_star <= 1e-9, detail};
}

// 6. Beta curves from the CLI: regime flag and zero crossing.
Outcome curves() {
  const auto out = work_dir() / "curves.csv";
  const int rc = run_cli("bounds --lambda-c 1 --lambda-eps 1 --z 0.1,0.25,0.5 --delta-min 0.01 "
                         "--delta-max 5 --steps 500 --out \"" + out.string() + "\"",
                         work_dir() / "bounds.log");
  if (rc != 0) return {false, "bounds command failed: " + slurp(work_dir() / "bounds.log")};
  const auto table = csv::read(out.string());
  const auto zc = table.column("z"), dc = table.column("delta"), bc = table.column("beta_lower"),
             sc = table.column("delta_star"), qc = table.column("quadratic_regime");
  std::map<double, std::vector<std::vector<double>>> by_z;
  bool flag_ok = true, below = false, above = false;
  for (const auto& row : table.rows) {
    const double z = csv::parse_double(row[zc]), delta = csv::parse_double(row[dc]);
    const bool quad = row[qc] == "1";
    flag_ok = flag_ok && quad == (delta < 1.0);
    below |= delta < 1.0;
    above |= delta >= 1.0;
    by_z[z].push_back({delta, csv::parse_double(row[bc]), csv::parse_double(row[sc])});
  }
  bool cross_ok = by_z.size() == 3;
  double worst_gap = 0.0;
  for (const auto& [z, rows] : by_z) {
    bool found = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i - 1][1] > 0.0 && rows[i][1] <= 0.0) {
        const double star = rows[i][2];
        found = star >= rows[i - 1][0] && star <= rows[i][0];
        worst_gap = std::max(worst_gap, rows[i][0] - rows[i - 1][0]);
        break;
      }
    }
    cross_ok = cross_ok && found;
  }
  std::string detail = fmt("%.0f rows; regime flag set exactly for delta < 1; beta sign change brackets "
                           "delta* for each z (grid step %.4f)", double(table.rows.size()), worst_gap);
  if (!flag_ok) detail += " [flag mismatch]";
  if (!cross_ok) detail += " [crossing mismatch]";
  return {flag_ok && below && above && cross_ok, detail};
}

struct StrategyMeans {
  std::map<Strategy, double> final_accuracy;
  std::map<Strategy, std::vector<const TrialResult*>> trials;
};

StrategyMeans final_means(const ExperimentResult& r, std::size_t iterations) {
  StrategyMeans out;
  for (const auto& row : r.summary)
    if (row.iteration == iterations) out.final_accuracy[row.strategy] = row.test_accuracy_mean;
  for (const auto& run : r.runs)
    for (const auto& t : run.trials) out.trials[run.strategy].push_back(&t);
  return out;
}

// 7. Gaussian clusters: coverage versus least confidence versus random.
Outcome clusters() {
  ExperimentConfig cfg;
  cfg.dataset.kind = DatasetKind::kClusters;
  cfg.budget = 50;
  cfg.iterations = 5;
  cfg.trials = 3;
  cfg.strategies = {Strategy::kRandom, Strategy::kCoreset, Strategy::kLeastConfidence};
  const auto m = final_means(run_experiment(cfg), cfg.iterations);
  const double rnd = m.final_accuracy.at(Strategy::kRandom);
  const double core = m.final_accuracy.at(Strategy::kCoreset);
  const double lc = m.final_accuracy.at(Strategy::kLeastConfidence);
  return {core >= lc && lc <= rnd + 0.02,
          fmt("final accuracy coreset %.4f, least-confidence %.4f, random %.4f", core, lc, rnd)};
}

// 8. Quadrants: doubt weighting pulls acquisitions toward class boundaries.
Outcome concentration() {
  ExperimentConfig cfg;
  cfg.initial_labeled = 100;
  cfg.budget = 20;
  cfg.iterations = 4;
  cfg.trials = 5;
  cfg.strategies = {Strategy::kCoreset, Strategy::kDoubtCoreset};
  const auto m = final_means(run_experiment(cfg), cfg.iterations);
  auto mean_conc = [&](Strategy s) {
    double sum = 0.0;
    for (const auto* t : m.trials.at(s)) sum += boundary_concentration(t->acquired_points, DatasetKind::kQuadrants);
    return sum / static_cast<double>(m.trials.at(s).size());
  };
  const double plain = mean_conc(Strategy::kCoreset), doubted = mean_conc(Strategy::kDoubtCoreset);
  return {doubted < plain, fmt("mean distance to nearest axis: doubt-coreset %.4f, coreset %.4f", doubted, plain)};
}

// 9. Beam search with doubt weighting keeps pace with plain coverage.
Outcome ablation() {
  ExperimentConfig cfg;  // quadrant defaults: n=2000, m=100, b=50, 5 iterations
  cfg.trials = 5;
  cfg.beam_width = 10;
  cfg.strategies = {Strategy::kCoreset, Strategy::kBeamCoreset};
  const auto m = final_means(run_experiment(cfg), cfg.iterations);
  const double core = m.final_accuracy.at(Strategy::kCoreset);
  const double beam = m.final_accuracy.at(Strategy::kBeamCoreset);
  return {beam >= core - 0.01, fmt("final accuracy beam-coreset %.4f, coreset %.4f", beam, core)};
}

// 10. Analytic gradient against central finite differences.
Outcome gradient() {
  Rng rng(1010);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t classes = 2 + rng.below(4), d = 1 + rng.below(5), n = 1 + rng.below(15);
    auto x = random_matrix(n, d, rng);
    std::vector<int> y(n);
    for (int& v : y) v = static_cast<int>(rng.below(classes));
    std::vector<double> w(classes * (d + 1));
    for (double& v : w) v = rng.uniform(-1.5, 1.5);
    const auto g = loss_and_gradient(Classifier(classes, d, w), x, y).gradient;
    const double h = 1e-5;
    for (std::size_t k = 0; k < w.size(); ++k) {
      auto up = w, down = w;
      up[k] += h;
      down[k] -= h;
      const double fd = (loss_and_gradient(Classifier(classes, d, up), x, y).loss -
                         loss_and_gradient(Classifier(classes, d, down), x, y).loss) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - g[k]) / std::max({std::abs(fd), std::abs(g[k]), 1e-6}));
    }
  }
  return {worst <= 1e-5, fmt("20 instances, max relative deviation %.2e", worst)};
}

// 11. Every subcommand reproduces its output byte for byte.
Outcome determinism() {
  const auto dir = work_dir() / "determinism";
  fs::create_directories(dir);
  auto data = gen_quadrants(300, 4);
  write_features_csv((dir / "features.csv").string(), data.features);
  std::string mask = "index,selected\n";
  for (std::size_t i = 0; i < data.size(); ++i) mask += std::to_string(i) + (i % 10 == 0 ? ",1\n" : ",0\n");
  csv::write_file((dir / "labeled.csv").string(), mask);
  std::vector<std::size_t> lab;
  for (std::size_t i = 0; i < data.size(); i += 10) lab.push_back(i);
  std::vector<int> y;
  for (auto i : lab) y.push_back(data.labels[i]);
  auto model = train(data.features.select(lab), y, 4, TrainConfig{});
  write_probabilities_csv((dir / "probs.csv").string(), model.predict_proba(data.features));
  csv::write_file((dir / "exp.cfg").string(),
                  "n_points = 400\ninitial_labeled = 40\nbudget = 20\niterations = 3\ntrials = 2\n"
                  "strategies = random, coreset, beam-coreset, kmeans-closest\nbeam_width = 4\n");

  const std::string in = " --features \"" + (dir / "features.csv").string() + "\" --labeled-mask \"" +
                         (dir / "labeled.csv").string() + "\" --probs \"" + (dir / "probs.csv").string() + "\"";
  std::vector<std::string> failures;
  std::size_t compared = 0;
  auto twice = [&](const std::string& name, const std::function<std::string(const fs::path&)>& args,
                   const std::vector<std::string>& outputs) {
    const auto a = dir / (name + "_a"), b = dir / (name + "_b");
    fs::create_directories(a);
    fs::create_directories(b);
    if (run_cli(args(a), a / "stdout.txt") != 0 || run_cli(args(b), b / "stdout.txt") != 0) {
      failures.push_back(name + " (command failed)");
      return;
    }
    std::vector<std::string> files = outputs;
    if (files.empty())
      for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file() && e.path().filename() != "stdout.txt")
          files.push_back(fs::relative(e.path(), a).string());
    for (const auto& f : files) {
      ++compared;
      if (!fs::exists(a / f) || slurp(a / f) != slurp(b / f)) failures.push_back(name + "/" + f);
    }
  };
  for (const char* method : {"random", "coreset", "doubt-coreset", "least-confidence", "max-entropy",
                             "kmeans-closest"})
    twice(std::string("acquire-") + method,
          [&](const fs::path& o) {
            return "acquire" + in + " --method " + method + " --budget 12 --seed 5 --out \"" +
                   (o / "mask.csv").string() + "\"";
          },
          {"mask.csv"});
  twice("acquire-beam",
        [&](const fs::path& o) {
          return "acquire" + in + " --method beam-coreset --beam 6 --budget 8 --scaling-mode candidate-point"
                 " --out \"" + (o / "mask.csv").string() + "\" --ranked-out \"" + (o / "ranked.csv").string() + "\"";
        },
        {"mask.csv", "ranked.csv"});
  twice("experiment",
        [&](const fs::path& o) {
          return "experiment --config \"" + (dir / "exp.cfg").string() + "\" --out-dir \"" + (o / "run").string() + "\"";
        },
        {});
  twice("bounds",
        [&](const fs::path& o) {
          return "bounds --lambda-c 1.5 --lambda-eps 0.5 --z 0.2,0.7 --delta-min 0.1 --delta-max 3 --steps 50 --out \"" +
                 (o / "curves.csv").string() + "\"";
        },
        {"curves.csv"});
  twice("verify", [&](const fs::path&) { return std::string("verify"); }, {"stdout.txt"});

  std::string detail = std::to_string(compared) + " output files compared across reruns";
  for (const auto& f : failures) detail += "; differs: " + f;
  return {failures.empty() && compared >= 20, detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "tiled radii match the full distance matrix", 10, tiled_radii},
      {2, "greedy radius within twice the optimum", 30, two_approximation},
      {3, "uniform-doubt and single-beam reductions", 10, reductions},
      {4, "beam candidates ranked by uncertainty", 10, beam_ranking},
      {5, "bound derivations verified numerically", 5, theory},
      {6, "beta curves: regime flag and zero crossing", 5, curves},
      {7, "clusters: coreset vs least confidence vs random", 120, clusters},
      {8, "quadrants: doubt weighting concentrates on boundaries", 120, concentration},
      {9, "quadrants: beam search keeps pace with coreset", 300, ablation},
      {10, "classifier gradient vs finite differences", 5, gradient},
      {11, "CLI reruns are byte-identical", 600, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.passed && in_time;
    failed += !pass;
    std::printf("[%s] %2d %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.limit_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
