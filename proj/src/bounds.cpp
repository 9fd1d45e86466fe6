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

#include "doubtset/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "doubtset/csv.hpp"
#include "doubtset/error.hpp"
#include "doubtset/random.hpp"

namespace doubtset {

namespace {

void check_lambdas(double lambda_c, double lambda_eps, const char* op) {
  require(lambda_c >= 0.0 && std::isfinite(lambda_c), std::string(op) + ": lambda_c must be >= 0");
  require(lambda_eps >= 0.0 && std::isfinite(lambda_eps),
          std::string(op) + ": lambda_eps must be >= 0");
}

double deviation(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_step(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, flm, m, fm);
  const double right = simpson(m, fm, frm, b, fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

void BoundParams::validate() const {
  check_lambdas(lambda_c, lambda_eps, "BoundParams");
  require(delta >= 0.0 && std::isfinite(delta), "BoundParams: delta must be >= 0");
  require(z >= 0.0 && z <= 1.0, "BoundParams: z must lie in [0, 1]");
}

double doubt_upper_bound(double r, double lambda_c) {
  require(r >= 0.0, "doubt_upper_bound: r must be >= 0");
  check_lambdas(lambda_c, 0.0, "doubt_upper_bound");
  return std::min(1.0, r * lambda_c);
}

double hat_delta_bound(double delta, double lambda_c) {
  require(delta >= 0.0, "hat_delta_bound: delta must be >= 0");
  check_lambdas(lambda_c, 0.0, "hat_delta_bound");
  return delta * lambda_c >= 1.0 ? delta : delta * delta * lambda_c;
}

double p_err_bound(double r, double lambda_c, double lambda_eps) {
  require(r >= 0.0, "p_err_bound: r must be >= 0");
  check_lambdas(lambda_c, lambda_eps, "p_err_bound");
  return lambda_c * lambda_eps * r * r;
}

double beta_lower_bound(double delta, double r0, double lambda_c, double lambda_eps) {
  check_lambdas(lambda_c, lambda_eps, "beta_lower_bound");
  require(r0 > 0.0, "beta_lower_bound: r0 must be > 0 (r0^r0 is singular at 0)");
  require(r0 <= delta, "beta_lower_bound: r0 must not exceed delta");
  const double span = delta - r0;
  if (span == 0.0) return 0.0;
  const double lambda = lambda_c * lambda_eps;
  if (lambda == 0.0) return 1.0;
  const double log_product =
      span * std::log(lambda) - 2.0 * span + 2.0 * (delta * std::log(delta) - r0 * std::log(r0));
  return 1.0 - std::exp(log_product);
}

double beta_scaled(double delta, double z, double lambda_c, double lambda_eps) {
  check_lambdas(lambda_c, lambda_eps, "beta_scaled");
  require(delta > 0.0 && std::isfinite(delta), "beta_scaled: delta must be > 0");
  require(z > 0.0 && z <= 1.0, "beta_scaled: z must lie in (0, 1]");
  const double base = std::pow(delta * std::sqrt(lambda_c * lambda_eps) / std::numbers::e, 1.0 - z) *
                      std::pow(z, -z);
  return 1.0 - std::pow(base, 2.0 * delta);
}

double delta_star(double z, double lambda_c, double lambda_eps) {
  check_lambdas(lambda_c, lambda_eps, "delta_star");
  require(z > 0.0 && z < 1.0, "delta_star: z must lie strictly inside (0, 1)");
  require(lambda_c * lambda_eps > 0.0, "delta_star: lambda_c * lambda_eps must be > 0");
  return std::numbers::e * std::pow(z, z / (1.0 - z)) / std::sqrt(lambda_c * lambda_eps);
}

double beta_product_integral(double delta, double r0, double lambda_c, double lambda_eps,
                             double dr) {
  check_lambdas(lambda_c, lambda_eps, "beta_product_integral");
  require(r0 > 0.0 && r0 <= delta, "beta_product_integral: need 0 < r0 <= delta");
  require(dr > 0.0, "beta_product_integral: dr must be > 0");
  const double span = delta - r0;
  const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dr)));
  const double step = span / static_cast<double>(cells);
  // prod P(r)^dr = exp(sum dr ln P(r))
  double log_product = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    const double r = r0 + (static_cast<double>(k) + 0.5) * step;
    log_product += step * std::log(p_err_bound(r, lambda_c, lambda_eps));
  }
  return 1.0 - std::exp(log_product);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
  require(abs_tol > 0.0, "adaptive_simpson: tolerance must be > 0");
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return simpson_step(f, a, fa, b, fb, m, fm, simpson(a, fa, fm, b, fb), abs_tol, max_depth);
}

double log_quadratic_antiderivative(double x, double a) {
  return x * std::log(a * x * x) - 2.0 * x;
}

bool ClaimsReport::all_passed() const {
  return std::all_of(claims.begin(), claims.end(), [](const ClaimCheck& c) { return c.passed; });
}

ClaimsReport verify_claims(const VerifyOptions& options) {
  require(options.cases >= 1, "verify_claims: need at least one case");
  Rng rng(options.seed);
  ClaimsReport report;

  // Antiderivative of ln(a x^2) against quadrature.
  {
    ClaimCheck check{"antiderivative", false, 0.0, options.quadrature_tolerance, 0};
    auto run = [&](double a, double lo, double hi) {
      const double numeric =
          adaptive_simpson([a](double x) { return std::log(a * x * x); }, lo, hi, 1e-12);
      const double analytic = options.antiderivative(hi, a) - options.antiderivative(lo, a);
      check.max_deviation = std::max(check.max_deviation, deviation(numeric, analytic));
      ++check.cases;
    };
    run(1.0, 1.0, std::numbers::e);
    for (std::size_t i = 0; i < options.cases; ++i) {
      const double a = rng.uniform(1e-3, 10.0);
      double lo = rng.uniform(0.05, 5.0), hi = rng.uniform(0.05, 5.0);
      if (lo > hi) std::swap(lo, hi);
      run(a, lo, hi);
    }
    check.passed = check.max_deviation <= check.tolerance;
    report.claims.push_back(check);
  }

  // Rewriting r0 = delta z: both sides of the identity, then the two beta routes.
  {
    ClaimCheck check{"scaling-identity", false, 0.0, options.identity_tolerance, 0};
    for (std::size_t i = 0; i < options.cases; ++i) {
      const double delta = rng.uniform(0.05, 5.0);
      const double z = rng.uniform(0.01, 1.0);
      const double lc = rng.uniform(0.05, 3.0), le = rng.uniform(0.05, 3.0);
      const double lambda = lc * le;
      const double lhs = std::pow(lambda, delta * (1.0 - z)) /
                         std::pow(std::exp(1.0 - z), 2.0 * delta) *
                         std::pow(std::pow(delta, delta) /
                                      (std::pow(delta, delta * z) * std::pow(z, delta * z)),
                                  2.0);
      const double rhs =
          std::pow(std::pow(delta * std::sqrt(lambda) / std::numbers::e, 1.0 - z) / std::pow(z, z),
                   2.0 * delta);
      check.max_deviation = std::max(check.max_deviation, deviation(lhs, rhs));
      check.max_deviation =
          std::max(check.max_deviation,
                   deviation(beta_scaled(delta, z, lc, le), beta_lower_bound(delta, delta * z, lc, le)));
      ++check.cases;
    }
    check.passed = check.max_deviation <= check.tolerance;
    report.claims.push_back(check);
  }

  // Closed form against the discretised product integral.
  {
    ClaimCheck check{"product-integral", false, 0.0, options.product_integral_tolerance, 0};
    auto run = [&](double delta, double r0, double lc, double le) {
      const double closed = beta_lower_bound(delta, r0, lc, le);
      const double discrete =
          beta_product_integral(delta, r0, lc, le, options.product_integral_step);
      check.max_deviation = std::max(check.max_deviation, deviation(closed, discrete));
      ++check.cases;
    };
    run(0.5, 0.25, 1.0, 1.0);
    for (std::size_t i = 0; i < options.cases; ++i) {
      const double delta = rng.uniform(0.05, 3.0);
      const double z = rng.uniform(0.05, 1.0);
      run(delta, delta * z, rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0));
    }
    check.passed = check.max_deviation <= check.tolerance;
    report.claims.push_back(check);
  }
  return report;
}

std::vector<double> linspace(double lo, double hi, std::size_t steps) {
  require(steps >= 1, "linspace: steps must be >= 1");
  require(lo <= hi, "linspace: lo must not exceed hi");
  if (steps == 1) return {lo};
  std::vector<double> out(steps);
  for (std::size_t i = 0; i < steps; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  out.back() = hi;
  return out;
}

std::vector<CurveRow> beta_curves(const std::vector<double>& z_list,
                                  const std::vector<double>& delta_grid, double lambda_c,
                                  double lambda_eps) {
  require(!z_list.empty(), "beta_curves: empty z list");
  require(!delta_grid.empty(), "beta_curves: empty delta grid");
  for (double d : delta_grid) require(d > 0.0, "beta_curves: deltas must be > 0");
  std::vector<CurveRow> rows;
  rows.reserve(z_list.size() * delta_grid.size());
  for (double z : z_list) {
    const double star = delta_star(z, lambda_c, lambda_eps);
    for (double d : delta_grid) {
      const double beta = beta_scaled(d, z, lambda_c, lambda_eps);
      rows.push_back({z, d, beta, std::max(0.0, beta), star, d * lambda_c < 1.0});
    }
  }
  return rows;
}

std::string curves_csv(const std::vector<CurveRow>& rows) {
  std::string out = "z,delta,beta_lower,beta_lower_clamped,delta_star,quadratic_regime\n";
  for (const auto& r : rows) {
    out += csv::format(r.z) + ',' + csv::format(r.delta) + ',' + csv::format(r.beta_lower) + ',' +
           csv::format(r.beta_lower_clamped) + ',' + csv::format(r.delta_star) + ',' +
           (r.quadratic_regime ? '1' : '0') + '\n';
  }
  return out;
}

}  // namespace doubtset
