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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "doubtset/data.hpp"
#include "doubtset/error.hpp"
#include "doubtset/model.hpp"
#include "helpers.hpp"

using namespace doubtset;

namespace {

// Cross-entropy written out directly, for finite differences.
double direct_loss(const std::vector<double>& w, std::size_t classes, const FeatureMatrix& x,
                   const std::vector<int>& y) {
  const std::size_t d = x.dims();
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    std::vector<double> z(classes);
    for (std::size_t c = 0; c < classes; ++c) {
      z[c] = w[c * (d + 1) + d];
      for (std::size_t k = 0; k < d; ++k) z[c] += w[c * (d + 1) + k] * x.at(i, k);
    }
    const double mx = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double v : z) s += std::exp(v - mx);
    total += mx + std::log(s) - z[static_cast<std::size_t>(y[i])];
  }
  return total / static_cast<double>(x.rows());
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("zero weights predict the uniform distribution") {
  Classifier model(4, 3);
  auto p = model.predict_proba(FeatureMatrix::from_rows({{1, 2, 3}, {-4, 0, 9}}));
  for (std::size_t i = 0; i < 2; ++i)
    for (double v : p.row(i)) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(model.predict_proba(FeatureMatrix::from_rows({{1, 2}})), InvalidInput);
  CHECK_THROWS_AS(Classifier(1, 2), InvalidInput);
  CHECK_THROWS_AS(Classifier(2, 2, {1, 2, 3}), InvalidInput);
}

TEST_CASE("evaluate examples") {
  const std::vector<int> y{0, 1, 2};
  auto perfect = evaluate(ProbabilityMatrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}), y);
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.mean_cross_entropy == 0.0);
  auto uniform = evaluate(Classifier(4, 1), FeatureMatrix::from_rows({{1}, {2}}), std::vector<int>{0, 3});
  CHECK(uniform.mean_cross_entropy == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK_THROWS_AS(evaluate(Classifier(2, 1), FeatureMatrix(1), std::vector<int>{}), InvalidInput);
  CHECK_THROWS_AS(evaluate(Classifier(2, 1), FeatureMatrix::from_rows({{1}}), std::vector<int>{2}),
                  InvalidInput);
}

TEST_CASE("scaling weights keeps the argmax and sharpens the maximum") {
  Rng rng(12);
  std::vector<double> w(3 * 3);
  for (double& v : w) v = rng.uniform(-1, 1);
  auto x = testing::random_matrix(20, 2, rng);
  double prev_max[20];
  std::size_t arg[20];
  for (int step = 0; step < 6; ++step) {
    const double t = 0.5 + step;
    std::vector<double> scaled = w;
    for (double& v : scaled) v *= t;
    auto p = Classifier(3, 2, scaled).predict_proba(x);
    for (std::size_t i = 0; i < 20; ++i) {
      auto r = p.row(i);
      double sum = 0.0;
      for (double v : r) sum += v;
      CHECK(std::abs(sum - 1.0) <= 1e-12);
      const auto it = std::max_element(r.begin(), r.end());
      const auto a = static_cast<std::size_t>(it - r.begin());
      if (step) {
        CHECK(a == arg[i]);
        CHECK(*it >= prev_max[i]);
      }
      arg[i] = a;
      prev_max[i] = *it;
    }
  }
}

TEST_CASE("analytic gradient matches central differences") {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t classes = 2 + rng.below(3), d = 1 + rng.below(4), n = 1 + rng.below(12);
    auto x = testing::random_matrix(n, d, rng, 2.0);
    std::vector<int> y(n);
    for (int& v : y) v = static_cast<int>(rng.below(classes));
    std::vector<double> w(classes * (d + 1));
    for (double& v : w) v = rng.uniform(-1, 1);
    const auto g = loss_and_gradient(Classifier(classes, d, w), x, y).gradient;
    CHECK(loss_and_gradient(Classifier(classes, d, w), x, y).loss ==
          doctest::Approx(direct_loss(w, classes, x, y)).epsilon(1e-12));
    const double h = 1e-5;
    for (std::size_t k = 0; k < w.size(); ++k) {
      auto up = w, down = w;
      up[k] += h;
      down[k] -= h;
      const double fd = (direct_loss(up, classes, x, y) - direct_loss(down, classes, x, y)) / (2 * h);
      const double denom = std::max({std::abs(fd), std::abs(g[k]), 1e-6});
      CHECK(std::abs(fd - g[k]) / denom <= 1e-5);
    }
  }
}

TEST_CASE("gradient over a row subset") {
  auto x = FeatureMatrix::from_rows({{1}, {2}, {3}});
  const std::vector<int> y{0, 1, 1};
  Classifier model(2, 1, {0.3, -0.1, 0.2, 0.4});
  const std::vector<std::size_t> rows{1, 2};
  auto sub = loss_and_gradient(model, x, y, rows);
  auto direct = loss_and_gradient(model, x.select(rows), std::vector<int>{1, 1});
  CHECK(sub.loss == doctest::Approx(direct.loss).epsilon(1e-15));
  for (std::size_t k = 0; k < sub.gradient.size(); ++k)
    CHECK(sub.gradient[k] == doctest::Approx(direct.gradient[k]).epsilon(1e-15));
}

TEST_CASE("separable points reach full training accuracy") {
  auto x = FeatureMatrix::from_rows({{-2, 0}, {-1, 1}, {1, -1}, {2, 0}});
  const std::vector<int> y{0, 0, 1, 1};
  TrainConfig cfg;
  cfg.target_train_accuracy = 1.0;
  auto model = train(x, y, 2, cfg);
  CHECK(evaluate(model, x, y).accuracy == 1.0);
  CHECK(model.warnings.empty());
}

TEST_CASE("quadrants are learned to 99 percent") {
  auto data = gen_quadrants(200, 5);
  auto model = train(data.features, data.labels, 4, TrainConfig{});
  CHECK(evaluate(model, data.features, data.labels).accuracy >= 0.99);
  auto p = model.predict_proba(FeatureMatrix::from_rows({{0.9, 0.9}}));
  auto r = p.row(0);
  CHECK(std::max_element(r.begin(), r.end()) - r.begin() == 0);
  for (double dv : doubt(p)) CHECK(dv <= 0.75);
}

TEST_CASE("zero epochs leaves the uniform model") {
  auto data = gen_quadrants(40, 1);
  TrainConfig cfg;
  cfg.epochs = 0;
  auto model = train(data.features, data.labels, 4, cfg);
  for (double w : model.weights()) CHECK(w == 0.0);
  CHECK(model.training_log.empty());
}

TEST_CASE("plain gradient descent never increases the loss at small steps") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto data = gen_quadrants(120, seed);
    TrainConfig cfg;
    cfg.optimizer = Optimizer::kGradientDescent;
    cfg.learning_rate = 1e-3;
    cfg.batch_size = data.size();
    cfg.epochs = 200;
    cfg.target_train_accuracy = 1.0;
    cfg.seed = seed;
    auto model = train(data.features, data.labels, 4, cfg);
    REQUIRE(model.training_log.size() >= 2);
    CHECK(model.training_log.front().loss <= std::log(4.0));
    for (std::size_t e = 1; e < model.training_log.size(); ++e)
      CHECK(model.training_log[e].loss <= model.training_log[e - 1].loss);
  }
}

TEST_CASE("training is deterministic and warns on absent classes") {
  auto data = gen_quadrants(100, 9);
  TrainConfig cfg;
  cfg.seed = 4;
  cfg.epochs = 20;
  auto a = train(data.features, data.labels, 4, cfg);
  auto b = train(data.features, data.labels, 4, cfg);
  CHECK(a.weights() == b.weights());

  auto x = FeatureMatrix::from_rows({{0}, {1}});
  auto m = train(x, std::vector<int>{0, 0}, 3, cfg);
  CHECK(m.warnings.size() == 2);
  CHECK_THROWS_AS(train(FeatureMatrix(1), std::vector<int>{}, 2, cfg), InvalidInput);
  CHECK_THROWS_AS(train(x, std::vector<int>{0, 3}, 3, cfg), InvalidInput);
  TrainConfig bad;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(train(x, std::vector<int>{0, 1}, 2, bad), InvalidInput);
  bad = TrainConfig{};
  bad.target_train_accuracy = 1.5;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("optimizer names and model files") {
  CHECK(parse_optimizer("adam") == Optimizer::kAdam);
  CHECK(parse_optimizer("adaptive-moment") == Optimizer::kAdam);
  CHECK(parse_optimizer("plain-gradient-descent") == Optimizer::kGradientDescent);
  CHECK_THROWS_AS(parse_optimizer("lbfgs"), InvalidInput);

  auto dir = testing::temp_dir("model_csv");
  Classifier model(3, 2, {0.1, 0.2, 0.3, -1, -2, -3, 1e-9, 5, 7});
  save_classifier_csv((dir / "m.csv").string(), model);
  CHECK(testing::slurp(dir / "m.csv").rfind("class,w0,w1,bias\n", 0) == 0);
  auto back = load_classifier_csv((dir / "m.csv").string());
  CHECK(back.weights() == model.weights());
  CHECK(back.bias(1) == -3);
  CHECK(back.weight(2, 1) == 5);
}

}  // TEST_SUITE
