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

#include "doubtset/doubtset.h"

#include <algorithm>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "doubtset/bounds.hpp"
#include "doubtset/csv.hpp"
#include "doubtset/error.hpp"
#include "doubtset/geometry.hpp"
#include "doubtset/harness.hpp"
#include "doubtset/selection.hpp"

struct dset_matrix {
  doubtset::FeatureMatrix value;
};

struct dset_probabilities {
  doubtset::ProbabilityMatrix value;
};

struct dset_mask {
  std::vector<std::uint8_t> flags;
};

struct dset_selection {
  doubtset::AcquireOutcome outcome;
  std::vector<std::size_t> pool;  // pool position -> row of the input matrix
};

struct dset_experiment {
  doubtset::ExperimentConfig config;
  std::optional<doubtset::ExperimentResult> result;
};

struct dset_claims {
  doubtset::ClaimsReport report;
};

namespace {

thread_local std::string last_error;

template <typename F>
dset_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return DSET_OK;
  } catch (const doubtset::InvalidInput& e) {
    last_error = e.what();
    return DSET_INVALID_INPUT;
  } catch (const doubtset::IoError& e) {
    last_error = e.what();
    return DSET_IO_ERROR;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return DSET_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return DSET_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown error";
    return DSET_INTERNAL_ERROR;
  }
}

void need(const void* p, const char* what) {
  doubtset::require(p != nullptr, std::string(what) + " must not be null");
}

doubtset::Strategy to_strategy(dset_method m) {
  using doubtset::Strategy;
  switch (m) {
    case DSET_METHOD_RANDOM: return Strategy::kRandom;
    case DSET_METHOD_CORESET: return Strategy::kCoreset;
    case DSET_METHOD_DOUBT_CORESET: return Strategy::kDoubtCoreset;
    case DSET_METHOD_BEAM_CORESET: return Strategy::kBeamCoreset;
    case DSET_METHOD_LEAST_CONFIDENCE: return Strategy::kLeastConfidence;
    case DSET_METHOD_MAX_ENTROPY: return Strategy::kMaxEntropy;
    case DSET_METHOD_KMEANS_CLOSEST: return Strategy::kKmeansClosest;
  }
  throw doubtset::InvalidInput("unknown method code " + std::to_string(static_cast<int>(m)));
}

doubtset::ScalingMode to_mode(dset_scaling_mode m) {
  switch (m) {
    case DSET_SCALING_ACQUIRED_POINT: return doubtset::ScalingMode::kAcquiredPoint;
    case DSET_SCALING_CANDIDATE_POINT: return doubtset::ScalingMode::kCandidatePoint;
  }
  throw doubtset::InvalidInput("unknown scaling mode code " + std::to_string(static_cast<int>(m)));
}

}  // namespace

extern "C" {

const char* dset_version(void) { return "0.1.0"; }

const char* dset_last_error(void) { return last_error.c_str(); }

dset_status dset_method_from_name(const char* name, dset_method* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = static_cast<dset_method>(doubtset::parse_strategy(name));
  });
}

dset_status dset_scaling_mode_from_name(const char* name, dset_scaling_mode* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = static_cast<dset_scaling_mode>(doubtset::parse_scaling_mode(name));
  });
}

dset_status dset_matrix_create(size_t rows, size_t dims, const double* row_major,
                               dset_matrix** out) {
  return guarded([&] {
    need(out, "out");
    doubtset::require(rows == 0 || row_major != nullptr, "row_major must not be null");
    std::vector<double> data(row_major, row_major + rows * dims);
    *out = new dset_matrix{doubtset::FeatureMatrix(rows, dims, std::move(data))};
  });
}

dset_status dset_matrix_load_csv(const char* path, dset_matrix** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new dset_matrix{doubtset::read_features_csv(path)};
  });
}

dset_status dset_matrix_save_csv(const dset_matrix* m, const char* path) {
  return guarded([&] {
    need(m, "matrix");
    need(path, "path");
    doubtset::write_features_csv(path, m->value);
  });
}

size_t dset_matrix_rows(const dset_matrix* m) { return m ? m->value.rows() : 0; }
size_t dset_matrix_dims(const dset_matrix* m) { return m ? m->value.dims() : 0; }
void dset_matrix_free(dset_matrix* m) { delete m; }

dset_status dset_pairwise_distance(const dset_matrix* a, const dset_matrix* b, double* out,
                                   size_t out_len) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    const auto d = doubtset::pairwise_distance(a->value, b->value);
    doubtset::require(out_len >= d.values.size(), "output buffer too small");
    doubtset::require(d.values.empty() || out != nullptr, "out must not be null");
    std::copy(d.values.begin(), d.values.end(), out);
  });
}

dset_status dset_compute_min_delta(const dset_matrix* unlabeled, const dset_matrix* labeled,
                                   size_t batch_size, double* out, size_t out_len) {
  return guarded([&] {
    need(unlabeled, "unlabeled");
    need(labeled, "labeled");
    const auto d = doubtset::compute_min_delta(unlabeled->value, labeled->value, batch_size);
    doubtset::require(out_len >= d.size(), "output buffer too small");
    doubtset::require(d.empty() || out != nullptr, "out must not be null");
    std::copy(d.begin(), d.end(), out);
  });
}

dset_status dset_probabilities_create(size_t rows, size_t classes, const double* row_major,
                                      dset_probabilities** out) {
  return guarded([&] {
    need(out, "out");
    doubtset::require(rows == 0 || row_major != nullptr, "row_major must not be null");
    std::vector<double> data(row_major, row_major + rows * classes);
    *out = new dset_probabilities{doubtset::ProbabilityMatrix(rows, classes, std::move(data))};
  });
}

dset_status dset_probabilities_load_csv(const char* path, dset_probabilities** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new dset_probabilities{doubtset::read_probabilities_csv(path)};
  });
}

size_t dset_probabilities_rows(const dset_probabilities* p) { return p ? p->value.rows() : 0; }
void dset_probabilities_free(dset_probabilities* p) { delete p; }

dset_status dset_mask_create(size_t size, const uint8_t* flags, dset_mask** out) {
  return guarded([&] {
    need(out, "out");
    doubtset::require(size == 0 || flags != nullptr, "flags must not be null");
    std::vector<std::uint8_t> bits(flags, flags + size);
    for (auto& b : bits) {
      doubtset::require(b <= 1, "mask flags must be 0 or 1");
    }
    *out = new dset_mask{std::move(bits)};
  });
}

dset_status dset_mask_load_csv(const char* path, size_t expected_rows, dset_mask** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new dset_mask{doubtset::read_mask_csv(path, expected_rows)};
  });
}

size_t dset_mask_size(const dset_mask* m) { return m ? m->flags.size() : 0; }
size_t dset_mask_count(const dset_mask* m) {
  return m ? static_cast<size_t>(std::count(m->flags.begin(), m->flags.end(), 1)) : 0;
}
void dset_mask_free(dset_mask* m) { delete m; }

void dset_acquire_options_init(dset_acquire_options* options) {
  if (!options) return;
  const doubtset::AcquireRequest defaults;
  options->method = DSET_METHOD_CORESET;
  options->budget = defaults.budget;
  options->beam_width = defaults.beam_width;
  options->scaling_mode = DSET_SCALING_ACQUIRED_POINT;
  options->batch_size = defaults.batch_size;
  options->seed = defaults.seed;
  options->kmeans_max_iters = defaults.kmeans_max_iters;
}

dset_status dset_acquire(const dset_matrix* features, const dset_mask* labeled,
                         const dset_probabilities* probabilities,
                         const dset_acquire_options* options, dset_selection** out) {
  return guarded([&] {
    need(features, "features");
    need(labeled, "labeled mask");
    need(options, "options");
    need(out, "out");
    const auto& x = features->value;
    doubtset::require(labeled->flags.size() == x.rows(),
                      "labeled mask has " + std::to_string(labeled->flags.size()) +
                          " rows but features have " + std::to_string(x.rows()));
    std::vector<std::size_t> lab, pool;
    for (std::size_t i = 0; i < x.rows(); ++i) (labeled->flags[i] ? lab : pool).push_back(i);

    doubtset::AcquireRequest request;
    request.method = to_strategy(options->method);
    request.budget = options->budget;
    request.beam_width = options->beam_width;
    request.scaling_mode = to_mode(options->scaling_mode);
    request.batch_size = options->batch_size;
    request.seed = options->seed;
    request.kmeans_max_iters = options->kmeans_max_iters;

    std::optional<doubtset::ProbabilityMatrix> pool_probs;
    if (probabilities) {
      doubtset::require(probabilities->value.rows() == x.rows(),
                        "probabilities have " + std::to_string(probabilities->value.rows()) +
                            " rows but features have " + std::to_string(x.rows()));
      pool_probs = probabilities->value.select(pool);
    }
    doubtset::require(probabilities || !doubtset::needs_probabilities(request.method),
                      std::string(doubtset::to_string(request.method)) +
                          " requires class probabilities");
    auto outcome = doubtset::acquire(x.select(pool), x.select(lab),
                                     pool_probs ? &*pool_probs : nullptr, request);
    *out = new dset_selection{std::move(outcome), std::move(pool)};
  });
}

size_t dset_selection_count(const dset_selection* s) {
  return s ? s->outcome.selection.order.size() : 0;
}

size_t dset_selection_index(const dset_selection* s, size_t i) {
  if (!s || i >= s->outcome.selection.order.size()) return static_cast<size_t>(-1);
  return s->pool[s->outcome.selection.order[i]];
}

size_t dset_selection_candidate_count(const dset_selection* s) {
  return s ? s->outcome.ranked.size() : 0;
}

double dset_selection_candidate_score(const dset_selection* s, size_t rank) {
  if (!s || rank >= s->outcome.ranked.size()) return 0.0;
  return s->outcome.ranked[rank].score;
}

dset_status dset_selection_save_mask_csv(const dset_selection* s, const char* path) {
  return guarded([&] {
    need(s, "selection");
    need(path, "path");
    doubtset::write_mask_csv(path, s->outcome.selection, s->pool);
  });
}

dset_status dset_selection_save_ranked_csv(const dset_selection* s, const char* path) {
  return guarded([&] {
    need(s, "selection");
    need(path, "path");
    doubtset::require(!s->outcome.ranked.empty(), "no ranked candidates (beam-coreset only)");
    doubtset::write_ranked_csv(path, s->outcome.ranked, s->pool);
  });
}

void dset_selection_free(dset_selection* s) { delete s; }

dset_status dset_experiment_load_config(const char* path, dset_experiment** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new dset_experiment{doubtset::load_config(path), std::nullopt};
  });
}

dset_status dset_experiment_parse_config(const char* text, dset_experiment** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new dset_experiment{doubtset::parse_config(text), std::nullopt};
  });
}

dset_status dset_experiment_run(dset_experiment* e) {
  return guarded([&] {
    need(e, "experiment");
    e->result = doubtset::run_experiment(e->config);
  });
}

dset_status dset_experiment_write(const dset_experiment* e, const char* out_dir) {
  return guarded([&] {
    need(e, "experiment");
    need(out_dir, "out_dir");
    doubtset::require(e->result.has_value(), "experiment has not been run");
    doubtset::write_experiment(*e->result, out_dir);
  });
}

size_t dset_experiment_record_count(const dset_experiment* e) {
  return e && e->result ? e->result->records.size() : 0;
}

void dset_experiment_free(dset_experiment* e) { delete e; }

const char* dset_config_reference(void) {
  static const std::string text = doubtset::config_reference();
  return text.c_str();
}

dset_status dset_beta_lower_bound(double delta, double r0, double lambda_c, double lambda_eps,
                                  double* out) {
  return guarded([&] {
    need(out, "out");
    *out = doubtset::beta_lower_bound(delta, r0, lambda_c, lambda_eps);
  });
}

dset_status dset_beta_scaled(double delta, double z, double lambda_c, double lambda_eps,
                             double* out) {
  return guarded([&] {
    need(out, "out");
    *out = doubtset::beta_scaled(delta, z, lambda_c, lambda_eps);
  });
}

dset_status dset_delta_star(double z, double lambda_c, double lambda_eps, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = doubtset::delta_star(z, lambda_c, lambda_eps);
  });
}

dset_status dset_hat_delta_bound(double delta, double lambda_c, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = doubtset::hat_delta_bound(delta, lambda_c);
  });
}

dset_status dset_bounds_write_curves(double lambda_c, double lambda_eps, const double* z,
                                     size_t z_count, double delta_min, double delta_max,
                                     size_t steps, const char* path) {
  return guarded([&] {
    need(path, "path");
    doubtset::require(z_count == 0 || z != nullptr, "z must not be null");
    const std::vector<double> zs(z, z + z_count);
    const auto rows =
        doubtset::beta_curves(zs, doubtset::linspace(delta_min, delta_max, steps), lambda_c,
                              lambda_eps);
    doubtset::csv::write_file(path, doubtset::curves_csv(rows));
  });
}

dset_status dset_verify_claims(double quadrature_tolerance, double identity_tolerance,
                               dset_claims** out) {
  return guarded([&] {
    need(out, "out");
    doubtset::require(quadrature_tolerance > 0.0 && identity_tolerance > 0.0,
                      "tolerances must be > 0");
    doubtset::VerifyOptions options;
    options.quadrature_tolerance = quadrature_tolerance;
    options.identity_tolerance = identity_tolerance;
    *out = new dset_claims{doubtset::verify_claims(options)};
  });
}

size_t dset_claims_count(const dset_claims* c) { return c ? c->report.claims.size() : 0; }

const char* dset_claims_name(const dset_claims* c, size_t i) {
  if (!c || i >= c->report.claims.size()) return "";
  return c->report.claims[i].name.c_str();
}

int dset_claims_passed(const dset_claims* c, size_t i) {
  return c && i < c->report.claims.size() && c->report.claims[i].passed ? 1 : 0;
}

double dset_claims_max_deviation(const dset_claims* c, size_t i) {
  return c && i < c->report.claims.size() ? c->report.claims[i].max_deviation : 0.0;
}

double dset_claims_tolerance(const dset_claims* c, size_t i) {
  return c && i < c->report.claims.size() ? c->report.claims[i].tolerance : 0.0;
}

int dset_claims_all_passed(const dset_claims* c) { return c && c->report.all_passed() ? 1 : 0; }

void dset_claims_free(dset_claims* c) { delete c; }

}  // extern "C"
