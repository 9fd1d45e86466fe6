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

#include "doubtset/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doubtset/csv.hpp"
#include "doubtset/error.hpp"
#include "doubtset/random.hpp"

namespace doubtset {

namespace {

// Sub-stream ids for derive_seed().
constexpr std::uint64_t kDatasetStream = 0;
constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kTrainStream = 100;
constexpr std::uint64_t kAcquireStream = 1000;

struct Named {
  std::string_view name;
  Strategy strategy;
};

constexpr Named kStrategies[] = {
    {"random", Strategy::kRandom},
    {"coreset", Strategy::kCoreset},
    {"doubt-coreset", Strategy::kDoubtCoreset},
    {"beam-coreset", Strategy::kBeamCoreset},
    {"least-confidence", Strategy::kLeastConfidence},
    {"max-entropy", Strategy::kMaxEntropy},
    {"kmeans-closest", Strategy::kKmeansClosest},
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  const long long v = csv::parse_int(value);
  require(v >= 0, "config: " + key + " must be >= 0");
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw InvalidInput("config: " + key + " must be true or false");
}

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

std::vector<std::size_t> remove_selected(std::vector<std::size_t>& pool, const Selection& sel) {
  const auto bits = sel.mask();
  std::vector<std::size_t> moved, kept;
  for (std::size_t pos = 0; pos < pool.size(); ++pos)
    (bits[pos] ? moved : kept).push_back(pool[pos]);
  pool = std::move(kept);
  return moved;
}

std::vector<int> labels_of(const LabeledDataset& ds, const std::vector<std::size_t>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(ds.labels[i]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Strategy dispatch

Strategy parse_strategy(std::string_view name) {
  for (const auto& s : kStrategies)
    if (s.name == name) return s.strategy;
  throw InvalidInput("unknown strategy '" + std::string(name) + "'");
}

std::string_view to_string(Strategy strategy) {
  for (const auto& s : kStrategies)
    if (s.strategy == strategy) return s.name;
  return "unknown";
}

bool needs_probabilities(Strategy strategy) {
  switch (strategy) {
    case Strategy::kDoubtCoreset:
    case Strategy::kBeamCoreset:
    case Strategy::kLeastConfidence:
    case Strategy::kMaxEntropy:
      return true;
    default:
      return false;
  }
}

AcquireOutcome acquire(const FeatureMatrix& x_u, const FeatureMatrix& x_l,
                       const ProbabilityMatrix* probabilities, const AcquireRequest& request) {
  if (needs_probabilities(request.method)) {
    require(probabilities != nullptr,
            "acquire: strategy '" + std::string(to_string(request.method)) +
                "' needs class probabilities");
    require(probabilities->rows() == x_u.rows(),
            "acquire: probability rows do not match the unlabeled pool");
  }
  AcquireOutcome out;
  switch (request.method) {
    case Strategy::kRandom:
      out.selection = random_acquisition(x_u.rows(), request.budget, request.seed);
      break;
    case Strategy::kCoreset:
      out.selection = greedy_coreset(x_u, x_l, request.budget, request.batch_size);
      break;
    case Strategy::kDoubtCoreset:
      out.selection = doubted_coreset(x_u, x_l, doubt(*probabilities), request.budget,
                                      request.batch_size, request.scaling_mode);
      break;
    case Strategy::kBeamCoreset: {
      auto beam = beam_doubted_coreset(x_u, x_l, doubt(*probabilities), request.budget,
                                       request.beam_width, request.batch_size,
                                       request.scaling_mode);
      out.selection = std::move(beam.selection);
      out.ranked = std::move(beam.ranked);
      break;
    }
    case Strategy::kLeastConfidence:
      out.selection = least_confidence_acquisition(doubt(*probabilities), request.budget);
      break;
    case Strategy::kMaxEntropy:
      out.selection = max_entropy_acquisition(*probabilities, request.budget);
      break;
    case Strategy::kKmeansClosest:
      out.selection = kmeans_closest_coreset(x_u, x_l, request.budget, request.seed,
                                             request.kmeans_max_iters);
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

std::size_t DatasetSpec::total_points() const {
  return kind == DatasetKind::kQuadrants ? n_points : classes * clusters_per_class * per_cluster;
}

LabeledDataset make_dataset(const DatasetSpec& spec, std::uint64_t seed) {
  if (spec.kind == DatasetKind::kQuadrants) return gen_quadrants(spec.n_points, seed);
  const auto layout = ring_cluster_layout(spec.classes, spec.clusters_per_class, spec.ring_radius);
  return gen_gaussian_clusters(layout.centers, spec.cluster_std, spec.per_cluster, layout.labels,
                               seed);
}

std::size_t ExperimentConfig::train_pool_size() const {
  const std::size_t n = dataset.total_points();
  return n - std::min(n, test_set_size(n, test_fraction));
}

void ExperimentConfig::validate() const {
  require(trials >= 1, "config: trials must be >= 1");
  require(!strategies.empty(), "config: no strategies");
  require(test_fraction > 0.0 && test_fraction < 1.0, "config: test_fraction must lie in (0, 1)");
  require(initial_labeled >= 1, "config: initial_labeled must be >= 1");
  require(beam_width >= 1, "config: beam_width must be >= 1");
  require(distance_batch_size >= 1, "config: distance_batch_size must be >= 1");
  if (dataset.kind == DatasetKind::kQuadrants) {
    require(dataset.n_points >= 4, "config: n_points must be >= 4");
  } else {
    require(dataset.cluster_std > 0.0, "config: cluster_std must be > 0");
    require(dataset.classes >= 2, "config: classes must be >= 2");
    require(dataset.clusters_per_class >= 1 && dataset.per_cluster >= 1,
            "config: clusters_per_class and per_cluster must be >= 1");
  }
  train.validate();
  const std::size_t need = initial_labeled + budget * iterations;
  require(need <= train_pool_size(),
          "config: initial_labeled + budget * iterations = " + std::to_string(need) +
              " exceeds the training pool of " + std::to_string(train_pool_size()));
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    require(eq != std::string::npos, where + "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    require(!value.empty(), where + "empty value for '" + key + "'");

    if (key == "dataset") {
      if (value == "quadrants") cfg.dataset.kind = DatasetKind::kQuadrants;
      else if (value == "clusters") cfg.dataset.kind = DatasetKind::kClusters;
      else throw InvalidInput(where + "dataset must be quadrants or clusters");
    } else if (key == "n_points") {
      cfg.dataset.n_points = parse_count(key, value);
    } else if (key == "cluster_std") {
      cfg.dataset.cluster_std = csv::parse_double(value);
    } else if (key == "per_cluster") {
      cfg.dataset.per_cluster = parse_count(key, value);
    } else if (key == "classes") {
      cfg.dataset.classes = parse_count(key, value);
    } else if (key == "clusters_per_class") {
      cfg.dataset.clusters_per_class = parse_count(key, value);
    } else if (key == "ring_radius") {
      cfg.dataset.ring_radius = csv::parse_double(value);
    } else if (key == "test_fraction") {
      cfg.test_fraction = csv::parse_double(value);
    } else if (key == "initial_labeled") {
      cfg.initial_labeled = parse_count(key, value);
    } else if (key == "budget") {
      cfg.budget = parse_count(key, value);
    } else if (key == "iterations") {
      cfg.iterations = parse_count(key, value);
    } else if (key == "strategies" || key == "strategy") {
      cfg.strategies.clear();
      for (const auto& name : csv::split(value)) cfg.strategies.push_back(parse_strategy(name));
    } else if (key == "beam_width") {
      cfg.beam_width = parse_count(key, value);
    } else if (key == "scaling_mode") {
      cfg.scaling_mode = parse_scaling_mode(value);
    } else if (key == "distance_batch_size") {
      cfg.distance_batch_size = parse_count(key, value);
    } else if (key == "kmeans_max_iters") {
      cfg.kmeans_max_iters = parse_count(key, value);
    } else if (key == "learning_rate") {
      cfg.train.learning_rate = csv::parse_double(value);
    } else if (key == "epochs") {
      cfg.train.epochs = parse_count(key, value);
    } else if (key == "train_batch_size") {
      cfg.train.batch_size = parse_count(key, value);
    } else if (key == "optimizer") {
      cfg.train.optimizer = parse_optimizer(value);
    } else if (key == "target_train_accuracy") {
      cfg.train.target_train_accuracy = csv::parse_double(value);
    } else if (key == "trials") {
      cfg.trials = parse_count(key, value);
    } else if (key == "base_seed") {
      cfg.base_seed = static_cast<std::uint64_t>(parse_count(key, value));
    } else if (key == "record_timing") {
      cfg.record_timing = parse_bool(key, value);
    } else {
      throw InvalidInput(where + "unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_reference() {
  return R"(dataset = quadrants            # quadrants | clusters
n_points = 2000                # quadrants: number of points
cluster_std = 1.0              # clusters: isotropic standard deviation
per_cluster = 250              # clusters: points per cluster
classes = 4                    # clusters: number of classes
clusters_per_class = 2         # clusters: clusters sharing each class
ring_radius = 5.0              # clusters: radius of the ring of centers
test_fraction = 0.25           # held-out test share
initial_labeled = 100          # initial labeled pool size
budget = 50                    # labels acquired per iteration
iterations = 5                 # acquisition rounds
strategies = coreset           # comma list: random, coreset, doubt-coreset, beam-coreset,
                               #   least-confidence, max-entropy, kmeans-closest
beam_width = 10                # beam-coreset width
scaling_mode = acquired-point  # acquired-point | candidate-point
distance_batch_size = 256      # tile size for nearest-labeled distances
kmeans_max_iters = 100         # Lloyd iterations for kmeans-closest
learning_rate = 0.05
epochs = 300
train_batch_size = 64
optimizer = adaptive-moment    # adaptive-moment | plain-gradient-descent
target_train_accuracy = 0.99   # early stop once reached
trials = 5                     # seeds base_seed .. base_seed + trials - 1
base_seed = 0
record_timing = false          # fill wall_time_ms (breaks byte-identical reruns)
)";
}

// ---------------------------------------------------------------------------
// Trials

TrialResult run_trial(const ExperimentConfig& config, Strategy strategy, std::uint64_t trial_seed,
                      std::size_t trial_index) {
  config.validate();
  using Clock = std::chrono::steady_clock;

  const auto dataset = make_dataset(config.dataset, derive_seed(trial_seed, kDatasetStream));
  const auto parts = split(dataset, {config.initial_labeled, config.test_fraction,
                                     derive_seed(trial_seed, kSplitStream)});
  std::vector<std::size_t> labeled = parts.labeled, unlabeled = parts.unlabeled;
  std::vector<std::size_t> train_pool = labeled;
  train_pool.insert(train_pool.end(), unlabeled.begin(), unlabeled.end());
  std::sort(train_pool.begin(), train_pool.end());

  const auto& features = dataset.features;
  const auto test_x = features.select(parts.test);
  const auto test_y = labels_of(dataset, parts.test);
  const auto pool_x = features.select(train_pool);
  const auto pool_y = labels_of(dataset, train_pool);

  auto fit = [&](std::size_t iteration) {
    TrainConfig tc = config.train;
    tc.seed = derive_seed(trial_seed, kTrainStream + iteration);
    return train(features.select(labeled), labels_of(dataset, labeled), dataset.classes, tc);
  };

  TrialResult result;
  result.acquired_points = FeatureMatrix(features.dims());
  auto record = [&](const Classifier& model, std::size_t iteration, double uncertainty,
                    double wall_ms) {
    MetricRecord r;
    r.strategy = strategy;
    r.trial = trial_index;
    r.seed = trial_seed;
    r.iteration = iteration;
    r.labeled_count = labeled.size();
    r.test_accuracy = parts.test.empty() ? 0.0 : evaluate(model, test_x, test_y).accuracy;
    r.coreset_radius =
        unlabeled.empty()
            ? 0.0
            : core_set_radius(compute_min_delta(features.select(unlabeled),
                                                features.select(labeled),
                                                config.distance_batch_size));
    r.empirical_coreset_loss = evaluate(model, pool_x, pool_y).mean_cross_entropy;
    r.acquisition_uncertainty = uncertainty;
    r.wall_time_ms = config.record_timing ? wall_ms : 0.0;
    r.pool_exhausted = unlabeled.empty();
    result.records.push_back(r);
  };

  const auto start = Clock::now();
  Classifier model = fit(0);
  record(model, 0, 0.0, std::chrono::duration<double, std::milli>(Clock::now() - start).count());

  for (std::size_t it = 1; it <= config.iterations; ++it) {
    if (unlabeled.size() < config.budget) {
      result.records.back().pool_exhausted = true;
      break;
    }
    const auto t0 = Clock::now();
    const auto x_u = features.select(unlabeled);
    const auto x_l = features.select(labeled);
    const auto probs = model.predict_proba(x_u);
    const auto doubts = doubt(probs);

    AcquireRequest request;
    request.method = strategy;
    request.budget = config.budget;
    request.beam_width = config.beam_width;
    request.scaling_mode = config.scaling_mode;
    request.batch_size = config.distance_batch_size;
    request.seed = derive_seed(trial_seed, kAcquireStream + it);
    request.kmeans_max_iters = config.kmeans_max_iters;
    auto outcome = acquire(x_u, x_l, &probs, request);

    double uncertainty = 0.0;
    if (!outcome.selection.order.empty()) {
      std::vector<double> picked;
      for (std::size_t pos : outcome.selection.order) picked.push_back(doubts[pos]);
      uncertainty = uncertainty_score(picked);
    }
    for (std::size_t pos : outcome.selection.order) result.acquired_points.append(x_u.row(pos));

    result.acquisitions.push_back({it, unlabeled, outcome.selection, std::move(outcome.ranked)});
    const auto moved = remove_selected(unlabeled, outcome.selection);
    labeled.insert(labeled.end(), moved.begin(), moved.end());
    std::sort(labeled.begin(), labeled.end());

    model = fit(it);
    record(model, it, uncertainty,
           std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    if (unlabeled.empty()) break;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Aggregation and output

std::vector<SummaryRow> summarize(const std::vector<MetricRecord>& records) {
  std::map<std::pair<int, std::size_t>, std::vector<const MetricRecord*>> groups;
  for (const auto& r : records) groups[{static_cast<int>(r.strategy), r.iteration}].push_back(&r);
  std::vector<SummaryRow> rows;
  for (const auto& [key, group] : groups) {
    SummaryRow row;
    row.strategy = static_cast<Strategy>(key.first);
    row.iteration = key.second;
    row.labeled_count = group.front()->labeled_count;
    row.trials = group.size();
    auto column = [&](double MetricRecord::*field) {
      std::vector<double> xs;
      for (const auto* r : group) xs.push_back(r->*field);
      return mean_std(xs);
    };
    std::tie(row.test_accuracy_mean, row.test_accuracy_std) = column(&MetricRecord::test_accuracy);
    std::tie(row.coreset_radius_mean, row.coreset_radius_std) = column(&MetricRecord::coreset_radius);
    std::tie(row.empirical_coreset_loss_mean, row.empirical_coreset_loss_std) =
        column(&MetricRecord::empirical_coreset_loss);
    std::tie(row.acquisition_uncertainty_mean, row.acquisition_uncertainty_std) =
        column(&MetricRecord::acquisition_uncertainty);
    std::tie(row.wall_time_ms_mean, row.wall_time_ms_std) = column(&MetricRecord::wall_time_ms);
    rows.push_back(row);
  }
  return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  for (Strategy strategy : config.strategies) {
    StrategyRun run{strategy, {}};
    for (std::size_t t = 0; t < config.trials; ++t) {
      const std::uint64_t seed = config.base_seed + t;
      try {
        run.trials.push_back(run_trial(config, strategy, seed, t));
      } catch (const std::exception& e) {
        throw InvalidInput("trial " + std::to_string(t) + " (seed " + std::to_string(seed) +
                           ", strategy " + std::string(to_string(strategy)) + ") failed: " +
                           e.what());
      }
      const auto& recs = run.trials.back().records;
      result.records.insert(result.records.end(), recs.begin(), recs.end());
    }
    result.runs.push_back(std::move(run));
  }
  result.summary = summarize(result.records);
  return result;
}

std::string metrics_csv(const std::vector<MetricRecord>& records) {
  std::string out =
      "strategy,trial,seed,iteration,labeled_count,test_accuracy,coreset_radius,"
      "empirical_coreset_loss,acquisition_uncertainty,wall_time_ms,pool_exhausted\n";
  for (const auto& r : records) {
    out += std::string(to_string(r.strategy)) + ',' + std::to_string(r.trial) + ',' +
           std::to_string(r.seed) + ',' + std::to_string(r.iteration) + ',' +
           std::to_string(r.labeled_count) + ',' + csv::format(r.test_accuracy) + ',' +
           csv::format(r.coreset_radius) + ',' + csv::format(r.empirical_coreset_loss) + ',' +
           csv::format(r.acquisition_uncertainty) + ',' + csv::format(r.wall_time_ms) + ',' +
           (r.pool_exhausted ? '1' : '0') + '\n';
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out =
      "strategy,iteration,labeled_count,trials,test_accuracy_mean,test_accuracy_std,"
      "coreset_radius_mean,coreset_radius_std,empirical_coreset_loss_mean,"
      "empirical_coreset_loss_std,acquisition_uncertainty_mean,acquisition_uncertainty_std,"
      "wall_time_ms_mean,wall_time_ms_std\n";
  for (const auto& r : rows) {
    out += std::string(to_string(r.strategy)) + ',' + std::to_string(r.iteration) + ',' +
           std::to_string(r.labeled_count) + ',' + std::to_string(r.trials);
    for (double v : {r.test_accuracy_mean, r.test_accuracy_std, r.coreset_radius_mean,
                     r.coreset_radius_std, r.empirical_coreset_loss_mean,
                     r.empirical_coreset_loss_std, r.acquisition_uncertainty_mean,
                     r.acquisition_uncertainty_std, r.wall_time_ms_mean, r.wall_time_ms_std})
      out += ',' + csv::format(v);
    out += '\n';
  }
  return out;
}

void write_experiment(const ExperimentResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(out_dir) / "masks", ec);
  if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());
  csv::write_file((fs::path(out_dir) / "metrics.csv").string(), metrics_csv(result.records));
  csv::write_file((fs::path(out_dir) / "summary.csv").string(), summary_csv(result.summary));
  for (const auto& run : result.runs) {
    for (std::size_t t = 0; t < run.trials.size(); ++t) {
      for (const auto& acq : run.trials[t].acquisitions) {
        const std::string stem = std::string(to_string(run.strategy)) + "_trial" +
                                 std::to_string(t) + "_iter" + std::to_string(acq.iteration);
        write_mask_csv((fs::path(out_dir) / "masks" / (stem + ".csv")).string(), acq.selection,
                       acq.pool);
        if (!acq.ranked.empty())
          write_ranked_csv((fs::path(out_dir) / "masks" / (stem + "_ranked.csv")).string(),
                           acq.ranked, acq.pool);
      }
    }
  }
}

double boundary_concentration(const FeatureMatrix& points, DatasetKind kind) {
  require(kind == DatasetKind::kQuadrants,
          "boundary_concentration: only defined for the quadrant dataset");
  require(points.dims() == 2, "boundary_concentration: quadrant points are 2-D");
  require(!points.empty(), "boundary_concentration: no points");
  double sum = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i)
    sum += std::min(std::abs(points.at(i, 0)), std::abs(points.at(i, 1)));
  return sum / static_cast<double>(points.rows());
}

}  // namespace doubtset
