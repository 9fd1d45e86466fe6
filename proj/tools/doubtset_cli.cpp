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

// doubtset command line: acquire, experiment, bounds, verify.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "doubtset/doubtset.h"

namespace {

// Exit codes: 0 ok, 1 claim failure, 2 invalid input, 3 I/O, 4 internal.
int report(dset_status status) {
  if (status == DSET_OK) return 0;
  std::fprintf(stderr, "error: %s\n", dset_last_error());
  return 1 + static_cast<int>(status);
}

struct AcquireArgs {
  std::string features, labeled_mask, probs, method, scaling_mode = "acquired-point", out,
      ranked_out;
  std::size_t budget = 0, beam = 10, batch_size = 256;
  std::uint64_t seed = 0;
};

int run_acquire(const AcquireArgs& a) {
  dset_acquire_options options;
  dset_acquire_options_init(&options);
  if (dset_status s = dset_method_from_name(a.method.c_str(), &options.method)) return report(s);
  if (dset_status s = dset_scaling_mode_from_name(a.scaling_mode.c_str(), &options.scaling_mode))
    return report(s);
  options.budget = a.budget;
  options.beam_width = a.beam;
  options.batch_size = a.batch_size;
  options.seed = a.seed;

  dset_matrix* features = nullptr;
  dset_mask* labeled = nullptr;
  dset_probabilities* probs = nullptr;
  dset_selection* selection = nullptr;
  dset_status s = dset_matrix_load_csv(a.features.c_str(), &features);
  if (!s) s = dset_mask_load_csv(a.labeled_mask.c_str(), dset_matrix_rows(features), &labeled);
  if (!s && !a.probs.empty()) s = dset_probabilities_load_csv(a.probs.c_str(), &probs);
  if (!s) s = dset_acquire(features, labeled, probs, &options, &selection);
  if (!s) s = dset_selection_save_mask_csv(selection, a.out.c_str());
  if (!s && !a.ranked_out.empty()) s = dset_selection_save_ranked_csv(selection, a.ranked_out.c_str());
  const int code = report(s);
  dset_selection_free(selection);
  dset_probabilities_free(probs);
  dset_mask_free(labeled);
  dset_matrix_free(features);
  return code;
}

int run_experiment(const std::string& config, const std::string& out_dir) {
  dset_experiment* e = nullptr;
  dset_status s = dset_experiment_load_config(config.c_str(), &e);
  if (!s) s = dset_experiment_run(e);
  if (!s) s = dset_experiment_write(e, out_dir.c_str());
  if (!s)
    std::printf("wrote %zu metric records to %s\n", dset_experiment_record_count(e),
                out_dir.c_str());
  dset_experiment_free(e);
  return report(s);
}

struct BoundsArgs {
  double lambda_c = 1.0, lambda_eps = 1.0, delta_min = 0.01, delta_max = 5.0;
  std::vector<double> z{0.1, 0.25, 0.5};
  std::size_t steps = 500;
  std::string out;
};

int run_bounds(const BoundsArgs& a) {
  return report(dset_bounds_write_curves(a.lambda_c, a.lambda_eps, a.z.data(), a.z.size(),
                                         a.delta_min, a.delta_max, a.steps, a.out.c_str()));
}

int run_verify(double tol_quadrature, double tol_identity) {
  dset_claims* claims = nullptr;
  if (dset_status s = dset_verify_claims(tol_quadrature, tol_identity, &claims)) return report(s);
  for (std::size_t i = 0; i < dset_claims_count(claims); ++i) {
    std::printf("%-18s %s  max_deviation=%.3e  tolerance=%.1e\n", dset_claims_name(claims, i),
                dset_claims_passed(claims, i) ? "PASS" : "FAIL",
                dset_claims_max_deviation(claims, i), dset_claims_tolerance(claims, i));
  }
  const int code = dset_claims_all_passed(claims) ? 0 : 1;
  dset_claims_free(claims);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Doubt-weighted core-set batch acquisition"};
  app.set_version_flag("--version", dset_version());
  app.require_subcommand(1);

  AcquireArgs acq;
  auto* acquire = app.add_subcommand("acquire", "One-shot acquisition on a user-supplied pool");
  acquire->add_option("--features", acq.features, "Feature CSV (header f0..f{d-1})")->required();
  acquire->add_option("--labeled-mask", acq.labeled_mask, "index,selected CSV; 1 marks labeled rows")
      ->required();
  acquire->add_option("--probs", acq.probs, "Class probability CSV (header p0..p{C-1})");
  acquire->add_option("--method", acq.method,
                      "random|coreset|doubt-coreset|beam-coreset|least-confidence|max-entropy|"
                      "kmeans-closest")
      ->required();
  acquire->add_option("--budget", acq.budget, "Points to acquire")->required();
  acquire->add_option("--beam", acq.beam, "Beam width")->capture_default_str();
  acquire->add_option("--scaling-mode", acq.scaling_mode, "acquired-point|candidate-point")
      ->capture_default_str();
  acquire->add_option("--batch-size", acq.batch_size, "Distance tile size")->capture_default_str();
  acquire->add_option("--seed", acq.seed, "Seed for random and kmeans-closest")
      ->capture_default_str();
  acquire->add_option("--out", acq.out, "Output mask CSV")->required();
  acquire->add_option("--ranked-out", acq.ranked_out, "Ranked beam candidates CSV");

  std::string config, out_dir;
  auto* experiment = app.add_subcommand("experiment", "Run a closed-loop experiment");
  experiment->add_option("--config", config, "key = value config file")->required();
  experiment->add_option("--out-dir", out_dir, "Output directory")->required();
  experiment->footer(dset_config_reference());

  BoundsArgs b;
  auto* bounds = app.add_subcommand("bounds", "Emit beta lower-bound curves");
  bounds->add_option("--lambda-c", b.lambda_c)->capture_default_str();
  bounds->add_option("--lambda-eps", b.lambda_eps)->capture_default_str();
  bounds->add_option("--z", b.z, "Comma-separated inner-radius fractions")
      ->delimiter(',')
      ->capture_default_str();
  bounds->add_option("--delta-min", b.delta_min)->capture_default_str();
  bounds->add_option("--delta-max", b.delta_max)->capture_default_str();
  bounds->add_option("--steps", b.steps)->capture_default_str();
  bounds->add_option("--out", b.out, "Output CSV")->required();

  double tol_quadrature = 1e-9, tol_identity = 1e-12;
  auto* verify = app.add_subcommand("verify", "Check the bound derivations numerically");
  verify->add_option("--tol-quadrature", tol_quadrature)->capture_default_str();
  verify->add_option("--tol-identity", tol_identity)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*acquire) return run_acquire(acq);
  if (*experiment) return run_experiment(config, out_dir);
  if (*bounds) return run_bounds(b);
  return run_verify(tol_quadrature, tol_identity);
}
