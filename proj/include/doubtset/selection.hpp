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

// Acquisition strategies over an unlabeled pool.
//
// Every strategy returns a Selection: the acquired pool positions in the
// order they were chosen. Pool positions index rows of x_u; callers that keep
// a separate dataset index map translate them on output. Argmax ties are
// always broken towards the lowest pool position.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "doubtset/geometry.hpp"

namespace doubtset {

/// Row-stochastic matrix: one class distribution per point.
class ProbabilityMatrix {
 public:
  static constexpr double kRowTolerance = 1e-6;

  ProbabilityMatrix() = default;
  ProbabilityMatrix(std::size_t rows, std::size_t classes, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t classes() const { return classes_; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * classes_, classes_};
  }
  ProbabilityMatrix select(std::span<const std::size_t> indices) const;

 private:
  std::size_t rows_ = 0;
  std::size_t classes_ = 0;
  std::vector<double> values_;
};

ProbabilityMatrix read_probabilities_csv(const std::string& path);
void write_probabilities_csv(const std::string& path, const ProbabilityMatrix& probs);

enum class ScalingMode {
  kAcquiredPoint,   // new distances scaled by the doubt of the point just acquired
  kCandidatePoint,  // new distances scaled by the doubt of the receiving pool point
};

ScalingMode parse_scaling_mode(std::string_view name);
std::string_view to_string(ScalingMode mode);

struct Selection {
  std::size_t pool_size = 0;
  std::vector<std::size_t> order;

  std::vector<std::uint8_t> mask() const;
};

/// I(x) = 1 - max_y P(y|x) for every row.
std::vector<double> doubt(const ProbabilityMatrix& probabilities);

/// U(s) = -(1/|s|) sum log(1 - I(x)). Entries above 1 - 1e-12 are clamped.
double uncertainty_score(std::span<const double> selected_doubts);

Selection greedy_coreset(const FeatureMatrix& x_u, const FeatureMatrix& x_l, std::size_t budget,
                         std::size_t batch_size = kDefaultDistanceBatch);

Selection doubted_coreset(const FeatureMatrix& x_u, const FeatureMatrix& x_l,
                          std::span<const double> doubts, std::size_t budget,
                          std::size_t batch_size = kDefaultDistanceBatch,
                          ScalingMode mode = ScalingMode::kAcquiredPoint);

/// One partial configuration tracked by the beam.
struct BeamCandidate {
  std::vector<std::size_t> selected;    // pool positions, acquisition order
  std::vector<std::size_t> remaining;   // working position -> pool position
  std::vector<double> min_hat_delta;    // doubt-scaled radii, per working position
  std::vector<double> min_delta;        // unscaled radii, per working position
  double score = 0.0;                   // uncertainty_score over `selected`

  std::vector<std::size_t> selected_set() const;  // ascending
  double max_min_hat_delta() const;
};

struct BeamResult {
  Selection selection;                  // rank-1 candidate
  std::vector<BeamCandidate> ranked;    // survivors, rank 1 first
};

BeamResult beam_doubted_coreset(const FeatureMatrix& x_u, const FeatureMatrix& x_l,
                                std::span<const double> doubts, std::size_t budget,
                                std::size_t beam_width,
                                std::size_t batch_size = kDefaultDistanceBatch,
                                ScalingMode mode = ScalingMode::kAcquiredPoint);

Selection random_acquisition(std::size_t pool_size, std::size_t budget, std::uint64_t seed);

Selection least_confidence_acquisition(std::span<const double> doubts, std::size_t budget);

Selection max_entropy_acquisition(const ProbabilityMatrix& probabilities, std::size_t budget);

/// Shannon entropy (natural log) of one distribution, 0 log 0 = 0.
double entropy(std::span<const double> distribution);

inline constexpr std::uint64_t kOptimalSearchLimit = 1'000'000;

struct OptimalResult {
  Selection selection;
  double radius = 0.0;
};

/// Exhaustive minimum-radius subset. Rejects instances with more than
/// kOptimalSearchLimit subsets.
OptimalResult optimal_coreset(const FeatureMatrix& x_u, const FeatureMatrix& x_l,
                              std::size_t budget);

Selection kmeans_closest_coreset(const FeatureMatrix& x_u, const FeatureMatrix& x_l,
                                 std::size_t budget, std::uint64_t seed,
                                 std::size_t max_iters = 100);

/// Covering radius of x_u once the chosen pool positions join x_l.
double radius_after(const FeatureMatrix& x_u, const FeatureMatrix& x_l,
                    std::span<const std::size_t> chosen,
                    std::size_t batch_size = kDefaultDistanceBatch);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k, std::uint64_t cap);

// `dataset_index` maps pool position -> row index in the caller's dataset.
void write_mask_csv(const std::string& path, const Selection& selection,
                    std::span<const std::size_t> dataset_index);
void write_ranked_csv(const std::string& path, const std::vector<BeamCandidate>& ranked,
                      std::span<const std::size_t> dataset_index);
std::string mask_csv(const Selection& selection, std::span<const std::size_t> dataset_index);

/// Reads an `index,selected` file of `expected_rows` rows; returns the flags
/// ordered by index.
std::vector<std::uint8_t> read_mask_csv(const std::string& path, std::size_t expected_rows);

}  // namespace doubtset
