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

#include "doubtset/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "doubtset/csv.hpp"
#include "doubtset/error.hpp"
#include "doubtset/random.hpp"

namespace doubtset {

namespace {

constexpr double kDoubtCeiling = 1.0 - 1e-12;

void check_budget(std::size_t budget, std::size_t pool, const char* op) {
  require(budget <= pool, std::string(op) + ": budget " + std::to_string(budget) +
                              " exceeds pool size " + std::to_string(pool));
}

void check_doubts(std::span<const double> doubts, std::size_t pool, const char* op) {
  require(doubts.size() == pool, std::string(op) + ": doubt vector has " +
                                     std::to_string(doubts.size()) + " entries for a pool of " +
                                     std::to_string(pool));
  for (double d : doubts)
    require(d >= 0.0 && d < 1.0, std::string(op) + ": doubt entry outside [0, 1)");
}

// Pool positions of the `count` largest scores; ties go to the lower position.
std::vector<std::size_t> top_positions(std::span<const double> scores, std::size_t count) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  count = std::min(count, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  order.resize(count);
  return order;
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

BeamCandidate initial_candidate(const FeatureMatrix& x_u, const FeatureMatrix& x_l,
                                std::span<const double> doubts, std::size_t batch_size) {
  BeamCandidate c;
  c.min_delta = compute_min_delta(x_u, x_l, batch_size);
  c.min_hat_delta.resize(c.min_delta.size());
  for (std::size_t i = 0; i < c.min_delta.size(); ++i)
    c.min_hat_delta[i] = c.min_delta[i] * doubts[i];
  c.remaining.resize(x_u.rows());
  std::iota(c.remaining.begin(), c.remaining.end(), std::size_t{0});
  return c;
}

// Acquires the point at working position `pos`: splices it out of the working
// pool and folds its (scaled) distances into the running minima.
void acquire(BeamCandidate& c, std::size_t pos, const FeatureMatrix& x_u,
             std::span<const double> doubts, ScalingMode mode) {
  const std::size_t chosen = c.remaining[pos];
  c.selected.push_back(chosen);
  const auto at = static_cast<std::ptrdiff_t>(pos);
  c.remaining.erase(c.remaining.begin() + at);
  c.min_hat_delta.erase(c.min_hat_delta.begin() + at);
  c.min_delta.erase(c.min_delta.begin() + at);

  const auto x = x_u.row(chosen);
  for (std::size_t k = 0; k < c.remaining.size(); ++k) {
    const std::size_t other = c.remaining[k];
    const double d = distance(x, x_u.row(other));
    const double scale = mode == ScalingMode::kAcquiredPoint ? doubts[chosen] : doubts[other];
    c.min_hat_delta[k] = std::min(c.min_hat_delta[k], d * scale);
    c.min_delta[k] = std::min(c.min_delta[k], d);
  }
}

double score_of(const std::vector<std::size_t>& set, std::span<const double> doubts) {
  std::vector<double> picked;
  picked.reserve(set.size());
  for (std::size_t i : set) picked.push_back(doubts[i]);
  return uncertainty_score(picked);
}

// Higher U first, then tighter doubt-scaled radius, then lexicographic set.
bool ranks_before(const BeamCandidate& a, const std::vector<std::size_t>& a_set,
                  const BeamCandidate& b, const std::vector<std::size_t>& b_set) {
  if (a.score != b.score) return a.score > b.score;
  const double ra = a.max_min_hat_delta(), rb = b.max_min_hat_delta();
  if (ra != rb) return ra < rb;
  return a_set < b_set;
}

}  // namespace

// ---------------------------------------------------------------------------
// Probabilities and doubt

ProbabilityMatrix::ProbabilityMatrix(std::size_t rows, std::size_t classes,
                                     std::vector<double> values)
    : rows_(rows), classes_(classes), values_(std::move(values)) {
  require(classes >= 1, "ProbabilityMatrix: need at least one class");
  require(values_.size() == rows * classes, "ProbabilityMatrix: size does not match rows * classes");
  for (std::size_t i = 0; i < rows; ++i) {
    double sum = 0.0;
    for (double p : row(i)) {
      require(std::isfinite(p) && p >= 0.0 && p <= 1.0,
              "ProbabilityMatrix: row " + std::to_string(i) + " has an entry outside [0, 1]");
      sum += p;
    }
    require(std::abs(sum - 1.0) <= kRowTolerance,
            "ProbabilityMatrix: row " + std::to_string(i) + " is not normalized (sum " +
                std::to_string(sum) + ")");
  }
}

ProbabilityMatrix ProbabilityMatrix::select(std::span<const std::size_t> indices) const {
  std::vector<double> values;
  values.reserve(indices.size() * classes_);
  for (std::size_t i : indices) {
    require(i < rows_, "ProbabilityMatrix::select: index out of range");
    const auto r = row(i);
    values.insert(values.end(), r.begin(), r.end());
  }
  return ProbabilityMatrix(indices.size(), classes_, std::move(values));
}

ProbabilityMatrix read_probabilities_csv(const std::string& path) {
  const auto table = csv::read(path);
  const std::size_t classes = table.header.size();
  for (std::size_t k = 0; k < classes; ++k)
    require(table.header[k] == "p" + std::to_string(k),
            path + ": expected header column p" + std::to_string(k));
  std::vector<double> values;
  values.reserve(table.rows.size() * classes);
  for (const auto& row : table.rows)
    for (const auto& cell : row) values.push_back(csv::parse_double(cell));
  return ProbabilityMatrix(table.rows.size(), classes, std::move(values));
}

void write_probabilities_csv(const std::string& path, const ProbabilityMatrix& probs) {
  std::string out;
  for (std::size_t k = 0; k < probs.classes(); ++k) {
    if (k) out += ',';
    out += 'p' + std::to_string(k);
  }
  out += '\n';
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    const auto r = probs.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (k) out += ',';
      out += csv::format(r[k]);
    }
    out += '\n';
  }
  csv::write_file(path, out);
}

ScalingMode parse_scaling_mode(std::string_view name) {
  if (name == "acquired-point") return ScalingMode::kAcquiredPoint;
  if (name == "candidate-point") return ScalingMode::kCandidatePoint;
  throw InvalidInput("unknown scaling mode '" + std::string(name) +
                     "' (expected acquired-point or candidate-point)");
}

std::string_view to_string(ScalingMode mode) {
  return mode == ScalingMode::kAcquiredPoint ? "acquired-point" : "candidate-point";
}

std::vector<std::uint8_t> Selection::mask() const {
  std::vector<std::uint8_t> bits(pool_size, 0);
  for (std::size_t i : order) bits[i] = 1;
  return bits;
}

std::vector<double> doubt(const ProbabilityMatrix& probabilities) {
  std::vector<double> out(probabilities.rows());
  for (std::size_t i = 0; i < probabilities.rows(); ++i) {
    const auto r = probabilities.row(i);
    out[i] = std::max(0.0, 1.0 - *std::max_element(r.begin(), r.end()));
  }
  return out;
}

double uncertainty_score(std::span<const double> selected_doubts) {
  require(!selected_doubts.empty(), "uncertainty_score: empty selection");
  double sum = 0.0;
  for (double d : selected_doubts) {
    require(d >= 0.0 && d < 1.0, "uncertainty_score: doubt entry outside [0, 1)");
    sum += std::log1p(-std::min(d, kDoubtCeiling));
  }
  return -sum / static_cast<double>(selected_doubts.size());
}

// ---------------------------------------------------------------------------
// Core-set strategies

Selection greedy_coreset(const FeatureMatrix& x_u, const FeatureMatrix& x_l, std::size_t budget,
                         std::size_t batch_size) {
  check_budget(budget, x_u.rows(), "greedy_coreset");
  auto min_delta = compute_min_delta(x_u, x_l, batch_size);
  std::vector<bool> taken(x_u.rows(), false);
  Selection sel{x_u.rows(), {}};

  for (std::size_t t = 0; t < budget; ++t) {
    std::size_t best = x_u.rows();
    for (std::size_t i = 0; i < x_u.rows(); ++i) {
      if (taken[i]) continue;
      if (best == x_u.rows() || min_delta[i] > min_delta[best]) best = i;
    }
    taken[best] = true;
    sel.order.push_back(best);
    const auto x = x_u.row(best);
    for (std::size_t k = 0; k < x_u.rows(); ++k)
      if (!taken[k]) min_delta[k] = std::min(min_delta[k], distance(x, x_u.row(k)));
  }
  return sel;
}

Selection doubted_coreset(const FeatureMatrix& x_u, const FeatureMatrix& x_l,
                          std::span<const double> doubts, std::size_t budget,
                          std::size_t batch_size, ScalingMode mode) {
  check_doubts(doubts, x_u.rows(), "doubted_coreset");
  check_budget(budget, x_u.rows(), "doubted_coreset");
  auto state = initial_candidate(x_u, x_l, doubts, batch_size);
  for (std::size_t t = 0; t < budget; ++t)
    acquire(state, argmax(state.min_hat_delta), x_u, doubts, mode);
  return Selection{x_u.rows(), std::move(state.selected)};
}

std::vector<std::size_t> BeamCandidate::selected_set() const {
  auto s = selected;
  std::sort(s.begin(), s.end());
  return s;
}

double BeamCandidate::max_min_hat_delta() const {
  return min_hat_delta.empty() ? 0.0 : *std::max_element(min_hat_delta.begin(), min_hat_delta.end());
}

BeamResult beam_doubted_coreset(const FeatureMatrix& x_u, const FeatureMatrix& x_l,
                                std::span<const double> doubts, std::size_t budget,
                                std::size_t beam_width, std::size_t batch_size,
                                ScalingMode mode) {
  require(beam_width >= 1, "beam_doubted_coreset: beam width must be >= 1");
  check_doubts(doubts, x_u.rows(), "beam_doubted_coreset");
  check_budget(budget, x_u.rows(), "beam_doubted_coreset");

  std::vector<BeamCandidate> beam{initial_candidate(x_u, x_l, doubts, batch_size)};

  for (std::size_t t = 0; t < budget; ++t) {
    std::vector<BeamCandidate> successors;
    successors.reserve(beam.size() * beam_width);
    for (const auto& parent : beam) {
      for (std::size_t pos : top_positions(parent.min_hat_delta, beam_width)) {
        BeamCandidate child = parent;
        acquire(child, pos, x_u, doubts, mode);
        child.score = score_of(child.selected_set(), doubts);
        successors.push_back(std::move(child));
      }
    }

    std::vector<std::vector<std::size_t>> sets;
    sets.reserve(successors.size());
    for (const auto& s : successors) sets.push_back(s.selected_set());
    std::vector<std::size_t> order(successors.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return ranks_before(successors[a], sets[a], successors[b], sets[b]);
    });

    // Same configuration reached in a different order is kept once: the
    // first occurrence in rank order.
    std::vector<BeamCandidate> next;
    std::vector<const std::vector<std::size_t>*> kept;
    for (std::size_t idx : order) {
      if (next.size() == beam_width) break;
      const bool dup = std::any_of(kept.begin(), kept.end(),
                                   [&](const auto* s) { return *s == sets[idx]; });
      if (dup) continue;
      kept.push_back(&sets[idx]);
      next.push_back(std::move(successors[idx]));
    }
    beam = std::move(next);
  }

  if (budget == 0) beam.front().score = 0.0;
  BeamResult result;
  result.selection = Selection{x_u.rows(), beam.front().selected};
  result.ranked = std::move(beam);
  return result;
}

// ---------------------------------------------------------------------------
// Baselines

Selection random_acquisition(std::size_t pool_size, std::size_t budget, std::uint64_t seed) {
  check_budget(budget, pool_size, "random_acquisition");
  Rng rng(seed);
  return Selection{pool_size, sample_without_replacement(pool_size, budget, rng)};
}

Selection least_confidence_acquisition(std::span<const double> doubts, std::size_t budget) {
  check_budget(budget, doubts.size(), "least_confidence_acquisition");
  return Selection{doubts.size(), top_positions(doubts, budget)};
}

double entropy(std::span<const double> distribution) {
  double h = 0.0;
  for (double p : distribution)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

Selection max_entropy_acquisition(const ProbabilityMatrix& probabilities, std::size_t budget) {
  check_budget(budget, probabilities.rows(), "max_entropy_acquisition");
  std::vector<double> h(probabilities.rows());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = entropy(probabilities.row(i));
  return Selection{h.size(), top_positions(h, budget)};
}

// ---------------------------------------------------------------------------
// Small-instance oracles

std::uint64_t binomial(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    const std::uint64_t num = n - k + i;
    if (result > (std::numeric_limits<std::uint64_t>::max() / num)) return cap + 1;
    result = result * num / i;
    if (result > cap) return cap + 1;
  }
  return result;
}

double radius_after(const FeatureMatrix& x_u, const FeatureMatrix& x_l,
                    std::span<const std::size_t> chosen, std::size_t batch_size) {
  FeatureMatrix labeled = x_l;
  for (std::size_t i : chosen) labeled.append(x_u.row(i));
  if (x_u.empty()) return 0.0;
  return core_set_radius(compute_min_delta(x_u, labeled, batch_size));
}

OptimalResult optimal_coreset(const FeatureMatrix& x_u, const FeatureMatrix& x_l,
                              std::size_t budget) {
  const std::size_t n = x_u.rows();
  check_budget(budget, n, "optimal_coreset");
  const std::uint64_t subsets = binomial(n, budget, kOptimalSearchLimit);
  require(subsets <= kOptimalSearchLimit,
          "optimal_coreset: C(" + std::to_string(n) + ", " + std::to_string(budget) +
              ") exceeds the exhaustive search limit of " + std::to_string(kOptimalSearchLimit) +
              " subsets");

  const auto base = compute_min_delta(x_u, x_l, kDefaultDistanceBatch);
  const auto pool = pairwise_distance(x_u, x_u);

  std::vector<std::size_t> combo(budget);
  std::iota(combo.begin(), combo.end(), std::size_t{0});
  OptimalResult best{Selection{n, combo}, std::numeric_limits<double>::infinity()};

  while (true) {
    double radius = 0.0;
    for (std::size_t i = 0; i < n && radius < best.radius; ++i) {
      double nearest = base[i];
      for (std::size_t j : combo) nearest = std::min(nearest, pool.at(i, j));
      radius = std::max(radius, nearest);
    }
    if (radius < best.radius) {
      best.radius = radius;
      best.selection.order = combo;
    }
    // Next combination in lexicographic order.
    std::size_t k = budget;
    while (k > 0 && combo[k - 1] == n - budget + k - 1) --k;
    if (k == 0) break;
    ++combo[k - 1];
    for (std::size_t j = k; j < budget; ++j) combo[j] = combo[j - 1] + 1;
  }
  if (n == 0) best.radius = 0.0;
  return best;
}

Selection kmeans_closest_coreset(const FeatureMatrix& x_u, const FeatureMatrix& x_l,
                                 std::size_t budget, std::uint64_t seed, std::size_t max_iters) {
  require(x_l.empty() || x_l.dims() == x_u.dims(), "kmeans_closest_coreset: dimension mismatch");
  check_budget(budget, x_u.rows(), "kmeans_closest_coreset");
  const std::size_t n = x_u.rows(), d = x_u.dims();
  Selection sel{n, {}};
  if (budget == 0) return sel;

  Rng rng(seed);
  std::vector<double> centers;
  for (std::size_t i : sample_without_replacement(n, budget, rng)) {
    const auto r = x_u.row(i);
    centers.insert(centers.end(), r.begin(), r.end());
  }
  auto center = [&](std::size_t c) { return std::span<const double>(centers.data() + c * d, d); };

  std::vector<std::size_t> assign(n, budget);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = squared_distance(x_u.row(i), center(0));
      for (std::size_t c = 1; c < budget; ++c) {
        const double dc = squared_distance(x_u.row(i), center(c));
        if (dc < best_d) best_d = dc, best = c;
      }
      if (assign[i] != best) assign[i] = best, changed = true;
    }
    if (!changed) break;
    std::vector<double> sums(budget * d, 0.0);
    std::vector<std::size_t> counts(budget, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = x_u.row(i);
      for (std::size_t k = 0; k < d; ++k) sums[assign[i] * d + k] += r[k];
      ++counts[assign[i]];
    }
    // Empty clusters keep their previous center.
    for (std::size_t c = 0; c < budget; ++c)
      if (counts[c] > 0)
        for (std::size_t k = 0; k < d; ++k)
          centers[c * d + k] = sums[c * d + k] / static_cast<double>(counts[c]);
  }

  std::vector<bool> taken(n, false);
  for (std::size_t c = 0; c < budget; ++c) {
    std::size_t best = n;
    double best_d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double di = squared_distance(x_u.row(i), center(c));
      if (best == n || di < best_d) best = i, best_d = di;
    }
    taken[best] = true;
    sel.order.push_back(best);
  }
  return sel;
}

// ---------------------------------------------------------------------------
// File formats

std::string mask_csv(const Selection& selection, std::span<const std::size_t> dataset_index) {
  require(dataset_index.size() == selection.pool_size, "mask_csv: index map size mismatch");
  const auto bits = selection.mask();
  std::vector<std::size_t> order(bits.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return dataset_index[a] < dataset_index[b]; });
  std::string out = "index,selected\n";
  for (std::size_t pos : order)
    out += std::to_string(dataset_index[pos]) + ',' + (bits[pos] ? '1' : '0') + '\n';
  return out;
}

void write_mask_csv(const std::string& path, const Selection& selection,
                    std::span<const std::size_t> dataset_index) {
  csv::write_file(path, mask_csv(selection, dataset_index));
}

void write_ranked_csv(const std::string& path, const std::vector<BeamCandidate>& ranked,
                      std::span<const std::size_t> dataset_index) {
  std::string out = "rank,uncertainty_score,indices\n";
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    std::vector<std::size_t> ids;
    for (std::size_t pos : ranked[r].selected) ids.push_back(dataset_index[pos]);
    std::sort(ids.begin(), ids.end());
    out += std::to_string(r + 1) + ',' + csv::format(ranked[r].score) + ',';
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (k) out += ';';
      out += std::to_string(ids[k]);
    }
    out += '\n';
  }
  csv::write_file(path, out);
}

std::vector<std::uint8_t> read_mask_csv(const std::string& path, std::size_t expected_rows) {
  const auto table = csv::read(path);
  const std::size_t idx_col = table.column("index");
  const std::size_t sel_col = table.column("selected");
  require(table.rows.size() == expected_rows,
          path + ": expected " + std::to_string(expected_rows) + " rows, got " +
              std::to_string(table.rows.size()));
  std::vector<std::uint8_t> flags(expected_rows, 0);
  std::vector<bool> seen(expected_rows, false);
  for (const auto& row : table.rows) {
    const long long idx = csv::parse_int(row[idx_col]);
    const long long bit = csv::parse_int(row[sel_col]);
    require(idx >= 0 && static_cast<std::size_t>(idx) < expected_rows,
            path + ": index " + std::to_string(idx) + " out of range");
    require(bit == 0 || bit == 1, path + ": selected must be 0 or 1");
    require(!seen[static_cast<std::size_t>(idx)], path + ": duplicate index " + std::to_string(idx));
    seen[static_cast<std::size_t>(idx)] = true;
    flags[static_cast<std::size_t>(idx)] = static_cast<std::uint8_t>(bit);
  }
  return flags;
}

}  // namespace doubtset
