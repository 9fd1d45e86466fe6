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

#ifndef DOUBTSET_DOUBTSET_H
#define DOUBTSET_DOUBTSET_H

/*
 * C interface to libdoubtset.
 *
 * Objects are opaque handles created by *_create / *_load functions and
 * released with the matching *_free (free functions accept NULL). Every
 * fallible call returns a dset_status; on failure a description is available
 * from dset_last_error() until the next call on the same thread.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define DSET_API __declspec(dllexport)
#else
#  define DSET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dset_status {
  DSET_OK = 0,
  DSET_INVALID_INPUT = 1,
  DSET_IO_ERROR = 2,
  DSET_INTERNAL_ERROR = 3
} dset_status;

typedef enum dset_method {
  DSET_METHOD_RANDOM = 0,
  DSET_METHOD_CORESET = 1,
  DSET_METHOD_DOUBT_CORESET = 2,
  DSET_METHOD_BEAM_CORESET = 3,
  DSET_METHOD_LEAST_CONFIDENCE = 4,
  DSET_METHOD_MAX_ENTROPY = 5,
  DSET_METHOD_KMEANS_CLOSEST = 6
} dset_method;

typedef enum dset_scaling_mode {
  DSET_SCALING_ACQUIRED_POINT = 0,
  DSET_SCALING_CANDIDATE_POINT = 1
} dset_scaling_mode;

typedef struct dset_matrix dset_matrix;           /* feature rows */
typedef struct dset_probabilities dset_probabilities;
typedef struct dset_mask dset_mask;               /* per-point 0/1 flags */
typedef struct dset_selection dset_selection;     /* acquisition result */
typedef struct dset_experiment dset_experiment;   /* config + results */
typedef struct dset_claims dset_claims;           /* verification report */

DSET_API const char* dset_version(void);
DSET_API const char* dset_last_error(void);

/* Name <-> enum helpers. Names: random, coreset, doubt-coreset, beam-coreset,
 * least-confidence, max-entropy, kmeans-closest; acquired-point,
 * candidate-point. */
DSET_API dset_status dset_method_from_name(const char* name, dset_method* out);
DSET_API dset_status dset_scaling_mode_from_name(const char* name, dset_scaling_mode* out);

/* ---- feature matrices ---------------------------------------------------- */

DSET_API dset_status dset_matrix_create(size_t rows, size_t dims, const double* row_major,
                                        dset_matrix** out);
DSET_API dset_status dset_matrix_load_csv(const char* path, dset_matrix** out);
DSET_API dset_status dset_matrix_save_csv(const dset_matrix* m, const char* path);
DSET_API size_t dset_matrix_rows(const dset_matrix* m);
DSET_API size_t dset_matrix_dims(const dset_matrix* m);
DSET_API void dset_matrix_free(dset_matrix* m);

/* out receives rows(a) * rows(b) distances, row-major. */
DSET_API dset_status dset_pairwise_distance(const dset_matrix* a, const dset_matrix* b,
                                            double* out, size_t out_len);
/* out receives rows(unlabeled) nearest-labeled distances. */
DSET_API dset_status dset_compute_min_delta(const dset_matrix* unlabeled,
                                            const dset_matrix* labeled, size_t batch_size,
                                            double* out, size_t out_len);

/* ---- class probabilities ------------------------------------------------- */

DSET_API dset_status dset_probabilities_create(size_t rows, size_t classes,
                                               const double* row_major,
                                               dset_probabilities** out);
DSET_API dset_status dset_probabilities_load_csv(const char* path, dset_probabilities** out);
DSET_API size_t dset_probabilities_rows(const dset_probabilities* p);
DSET_API void dset_probabilities_free(dset_probabilities* p);

/* ---- masks --------------------------------------------------------------- */

DSET_API dset_status dset_mask_create(size_t size, const uint8_t* flags, dset_mask** out);
/* Reads an `index,selected` file that must cover exactly `expected_rows` rows. */
DSET_API dset_status dset_mask_load_csv(const char* path, size_t expected_rows, dset_mask** out);
DSET_API size_t dset_mask_size(const dset_mask* m);
DSET_API size_t dset_mask_count(const dset_mask* m);
DSET_API void dset_mask_free(dset_mask* m);

/* ---- acquisition --------------------------------------------------------- */

typedef struct dset_acquire_options {
  dset_method method;
  size_t budget;
  size_t beam_width;       /* beam-coreset */
  dset_scaling_mode scaling_mode;
  size_t batch_size;       /* distance tile size */
  uint64_t seed;           /* random, kmeans-closest */
  size_t kmeans_max_iters;
} dset_acquire_options;

DSET_API void dset_acquire_options_init(dset_acquire_options* options);

/*
 * Acquires `budget` points from the rows of `features` whose `labeled` flag is
 * 0. `probabilities` covers every row of `features` and may be NULL for
 * methods that do not use a model.
 */
DSET_API dset_status dset_acquire(const dset_matrix* features, const dset_mask* labeled,
                                  const dset_probabilities* probabilities,
                                  const dset_acquire_options* options, dset_selection** out);

DSET_API size_t dset_selection_count(const dset_selection* s);
/* Row index (into `features`) of the i-th acquisition, in acquisition order. */
DSET_API size_t dset_selection_index(const dset_selection* s, size_t i);
DSET_API size_t dset_selection_candidate_count(const dset_selection* s);
DSET_API double dset_selection_candidate_score(const dset_selection* s, size_t rank);
/* `index,selected`, one row per unlabeled point. */
DSET_API dset_status dset_selection_save_mask_csv(const dset_selection* s, const char* path);
/* `rank,uncertainty_score,indices`; beam-coreset only. */
DSET_API dset_status dset_selection_save_ranked_csv(const dset_selection* s, const char* path);
DSET_API void dset_selection_free(dset_selection* s);

/* ---- experiments --------------------------------------------------------- */

DSET_API dset_status dset_experiment_load_config(const char* path, dset_experiment** out);
DSET_API dset_status dset_experiment_parse_config(const char* text, dset_experiment** out);
DSET_API dset_status dset_experiment_run(dset_experiment* e);
/* Writes metrics.csv, summary.csv and masks/ (requires a completed run). */
DSET_API dset_status dset_experiment_write(const dset_experiment* e, const char* out_dir);
DSET_API size_t dset_experiment_record_count(const dset_experiment* e);
DSET_API void dset_experiment_free(dset_experiment* e);
/* Static text documenting every config key. */
DSET_API const char* dset_config_reference(void);

/* ---- bounds -------------------------------------------------------------- */

DSET_API dset_status dset_beta_lower_bound(double delta, double r0, double lambda_c,
                                           double lambda_eps, double* out);
DSET_API dset_status dset_beta_scaled(double delta, double z, double lambda_c, double lambda_eps,
                                      double* out);
DSET_API dset_status dset_delta_star(double z, double lambda_c, double lambda_eps, double* out);
DSET_API dset_status dset_hat_delta_bound(double delta, double lambda_c, double* out);

/* Beta curves over `steps` evenly spaced deltas in [delta_min, delta_max]
 * for each z, written as CSV. */
DSET_API dset_status dset_bounds_write_curves(double lambda_c, double lambda_eps, const double* z,
                                              size_t z_count, double delta_min, double delta_max,
                                              size_t steps, const char* path);

DSET_API dset_status dset_verify_claims(double quadrature_tolerance, double identity_tolerance,
                                        dset_claims** out);
DSET_API size_t dset_claims_count(const dset_claims* c);
DSET_API const char* dset_claims_name(const dset_claims* c, size_t i);
DSET_API int dset_claims_passed(const dset_claims* c, size_t i);
DSET_API double dset_claims_max_deviation(const dset_claims* c, size_t i);
DSET_API double dset_claims_tolerance(const dset_claims* c, size_t i);
DSET_API int dset_claims_all_passed(const dset_claims* c);
DSET_API void dset_claims_free(dset_claims* c);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* DOUBTSET_DOUBTSET_H */
