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

#pragma once

// Closed-loop active learning over synthetic data:
//
//   generate -> split -> train -> { acquire b -> label -> retrain -> record } x iterations
//
// Every random choice is drawn from a stream derived from the trial seed, so a
// (config, seed) pair fully determines the metric stream. Strategies compared
// under the same trial seed see the same dataset, split and initial model.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "doubtset/data.hpp"
#include "doubtset/geometry.hpp"
#include "doubtset/model.hpp"
#include "doubtset/selection.hpp"

namespace doubtset {

enum class Strategy {
  kRandom,
  kCoreset,
  kDoubtCoreset,
  kBeamCoreset,
  kLeastConfidence,
  kMaxEntropy,
  kKmeansClosest,
};

Strategy parse_strategy(std::string_view name);
std::string_view to_string(Strategy strategy);
bool needs_probabilities(Strategy strategy);

struct AcquireRequest {
  Strategy method = Strategy::kCoreset;
  std::size_t budget = 0;
  std::size_t beam_width = 10;
  ScalingMode scaling_mode = ScalingMode::kAcquiredPoint;
  std::size_t batch_size = kDefaultDistanceBatch;
  std::uint64_t seed = 0;
  std::size_t kmeans_max_iters = 100;
};

struct AcquireOutcome {
  Selection selection;
  std::vector<BeamCandidate> ranked;  // beam-coreset only
};

/// Dispatches one acquisition. `probabilities` rows align with x_u and may be
/// null for strategies that do not use a model.
AcquireOutcome acquire(const FeatureMatrix& x_u, const FeatureMatrix& x_l,
                       const ProbabilityMatrix* probabilities, const AcquireRequest& request);

enum class DatasetKind { kQuadrants, kClusters };

struct DatasetSpec {
  DatasetKind kind = DatasetKind::kQuadrants;
  std::size_t n_points = 2000;          // quadrants
  double cluster_std = 1.0;             // clusters
  std::size_t per_cluster = 250;
  std::size_t classes = 4;
  std::size_t clusters_per_class = 2;
  double ring_radius = 5.0;

  std::size_t total_points() const;
};

LabeledDataset make_dataset(const DatasetSpec& spec, std::uint64_t seed);

struct ExperimentConfig {
  DatasetSpec dataset;
  double test_fraction = 0.25;
  std::size_t initial_labeled = 100;
  std::size_t budget = 50;
  std::size_t iterations = 5;
  std::vector<Strategy> strategies{Strategy::kCoreset};
  std::size_t beam_width = 10;
  ScalingMode scaling_mode = ScalingMode::kAcquiredPoint;
  std::size_t distance_batch_size = kDefaultDistanceBatch;
  std::size_t kmeans_max_iters = 100;
  TrainConfig train;
  std::size_t trials = 5;
  std::uint64_t base_seed = 0;
  bool record_timing = false;

  std::size_t train_pool_size() const;
  void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys are errors.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
/// One line per accepted key, with its default.
std::string config_reference();

struct MetricRecord {
  Strategy strategy = Strategy::kCoreset;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t iteration = 0;
  std::size_t labeled_count = 0;
  double test_accuracy = 0.0;
  double coreset_radius = 0.0;
  double empirical_coreset_loss = 0.0;
  double acquisition_uncertainty = 0.0;
  double wall_time_ms = 0.0;
  bool pool_exhausted = false;
};

struct AcquisitionLog {
  std::size_t iteration = 0;
  std::vector<std::size_t> pool;       // dataset index of each pool position
  Selection selection;
  std::vector<BeamCandidate> ranked;
};

struct TrialResult {
  std::vector<MetricRecord> records;
  std::vector<AcquisitionLog> acquisitions;
  FeatureMatrix acquired_points{2};    // every acquisition, in order
};

TrialResult run_trial(const ExperimentConfig& config, Strategy strategy, std::uint64_t trial_seed,
                      std::size_t trial_index = 0);

struct SummaryRow {
  Strategy strategy = Strategy::kCoreset;
  std::size_t iteration = 0;
  std::size_t labeled_count = 0;
  std::size_t trials = 0;
  double test_accuracy_mean = 0.0, test_accuracy_std = 0.0;
  double coreset_radius_mean = 0.0, coreset_radius_std = 0.0;
  double empirical_coreset_loss_mean = 0.0, empirical_coreset_loss_std = 0.0;
  double acquisition_uncertainty_mean = 0.0, acquisition_uncertainty_std = 0.0;
  double wall_time_ms_mean = 0.0, wall_time_ms_std = 0.0;
};

struct StrategyRun {
  Strategy strategy = Strategy::kCoreset;
  std::vector<TrialResult> trials;
};

struct ExperimentResult {
  std::vector<StrategyRun> runs;
  std::vector<MetricRecord> records;   // ordered by (strategy, trial, iteration)
  std::vector<SummaryRow> summary;
};

/// Mean and sample standard deviation per (strategy, iteration).
std::vector<SummaryRow> summarize(const std::vector<MetricRecord>& records);

ExperimentResult run_experiment(const ExperimentConfig& config);

std::string metrics_csv(const std::vector<MetricRecord>& records);
std::string summary_csv(const std::vector<SummaryRow>& rows);

/// Writes metrics.csv, summary.csv and masks/ under out_dir (created if needed).
void write_experiment(const ExperimentResult& result, const std::string& out_dir);

/// Mean distance of points to the nearest class boundary (the axes) of the
/// quadrant dataset.
double boundary_concentration(const FeatureMatrix& points, DatasetKind kind);

}  // namespace doubtset
