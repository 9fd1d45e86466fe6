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

// Convergence bounds for doubt-scaled core-set radii.
//
// Notation: lambda_c is the Lipschitz constant of softmax confidence,
// lambda_eps that of the error rate given doubt, delta the distance to the
// nearest labelled point, r0 = delta * z the inner radius.
//
//   doubt(r)        <= min(1, r lambda_c)
//   hat_delta       <= delta            if delta lambda_c >= 1
//                      delta^2 lambda_c otherwise
//   P_err(r)        <= lambda_c lambda_eps r^2
//   beta            >= 1 - L^(delta - r0) exp(-2 (delta - r0)) (delta^delta / r0^r0)^2,  L = lambda_c lambda_eps
//   beta (r0=delta z) >= 1 - ((delta sqrt(L) / e)^(1-z) z^-z)^(2 delta)
//   delta*          = e z^(z / (1-z)) / sqrt(L)       (root of the line above)
//
// r0^r0 -> 1 as r0 -> 0, but r0 = 0 is rejected rather than special-cased.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace doubtset {

struct BoundParams {
  double lambda_c = 1.0;
  double lambda_eps = 1.0;
  double delta = 0.0;
  double z = 0.0;

  double r0() const { return delta * z; }
  void validate() const;
};

double doubt_upper_bound(double r, double lambda_c);
double hat_delta_bound(double delta, double lambda_c);
double p_err_bound(double r, double lambda_c, double lambda_eps);

/// Closed form in (delta, r0); evaluated in log space. May be negative.
double beta_lower_bound(double delta, double r0, double lambda_c, double lambda_eps);
/// Closed form in (delta, z); evaluated with the literal power form.
double beta_scaled(double delta, double z, double lambda_c, double lambda_eps);
double delta_star(double z, double lambda_c, double lambda_eps);

/// 1 - prod P_err(r)^dr over [r0, delta] on a uniform midpoint grid of step
/// at most `dr`, with P_err replaced by its unclamped quadratic bound.
double beta_product_integral(double delta, double r0, double lambda_c, double lambda_eps,
                             double dr);

/// Adaptive Simpson quadrature to an absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 60);

/// x ln(a x^2) - 2x, an antiderivative of ln(a x^2).
double log_quadratic_antiderivative(double x, double a);

struct ClaimCheck {
  std::string name;
  bool passed = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::size_t cases = 0;
};

struct ClaimsReport {
  std::vector<ClaimCheck> claims;
  bool all_passed() const;
};

struct VerifyOptions {
  double quadrature_tolerance = 1e-9;
  double identity_tolerance = 1e-12;
  double product_integral_tolerance = 1e-4;
  double product_integral_step = 1e-5;
  std::size_t cases = 40;
  std::uint64_t seed = 2022;
  // Replaceable for mutation testing.
  std::function<double(double, double)> antiderivative = log_quadratic_antiderivative;
};

/// Deviations are measured as |a - b| / max(1, |a|, |b|).
ClaimsReport verify_claims(const VerifyOptions& options = {});

struct CurveRow {
  double z = 0.0;
  double delta = 0.0;
  double beta_lower = 0.0;
  double beta_lower_clamped = 0.0;
  double delta_star = 0.0;
  bool quadratic_regime = false;
};

std::vector<double> linspace(double lo, double hi, std::size_t steps);

std::vector<CurveRow> beta_curves(const std::vector<double>& z_list,
                                  const std::vector<double>& delta_grid, double lambda_c,
                                  double lambda_eps);

std::string curves_csv(const std::vector<CurveRow>& rows);

}  // namespace doubtset
