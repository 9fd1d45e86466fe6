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
#include <numeric>
#include <set>

#include "doctest.h"
#include "doubtset/error.hpp"
#include "doubtset/random.hpp"

using namespace doubtset;

TEST_SUITE("random") {

TEST_CASE("engine follows the standard mt19937_64 sequence") {
  // The standard fixes the 10000th output of a default-seeded engine.
  Rng rng(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next();
  CHECK(v == 9981545732273789042ULL);
}

TEST_CASE("same seed, same stream") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform01();
    CHECK(x == b.uniform01());
    differs |= x != c.uniform01();
  }
  CHECK(differs);
}

TEST_CASE("uniform01 stays in [0, 1) with mean near 1/2") {
  Rng rng(7);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // sd of the mean is sqrt(1/12 / n)
  CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("below is uniform over its range") {
  Rng rng(11);
  const std::size_t k = 7;
  const int n = 70000;
  std::vector<int> counts(k, 0);
  for (int i = 0; i < n; ++i) ++counts[rng.below(k)];
  const double p = 1.0 / k, sigma = std::sqrt(n * p * (1 - p));
  for (int c : counts) CHECK(std::abs(c - n * p) < 4.0 * sigma);
  CHECK_THROWS_AS(rng.below(0), InvalidInput);
  CHECK(rng.below(1) == 0);
}

TEST_CASE("normal has unit variance") {
  Rng rng(3);
  const int n = 100000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  const double mean = s / n, var = s2 / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("derived seeds separate streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    for (std::uint64_t stream = 0; stream < 20; ++stream) seen.insert(derive_seed(seed, stream));
  CHECK(seen.size() == 400);
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
}

TEST_CASE("permutation and sampling") {
  Rng rng(5);
  auto p = permutation(50, rng);
  auto sorted = p;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> iota(50);
  std::iota(iota.begin(), iota.end(), std::size_t{0});
  CHECK(sorted == iota);

  auto s = sample_without_replacement(30, 10, rng);
  CHECK(s.size() == 10);
  CHECK(std::set<std::size_t>(s.begin(), s.end()).size() == 10);
  for (auto i : s) CHECK(i < 30);
  CHECK(sample_without_replacement(5, 0, rng).empty());
  CHECK_THROWS_AS(sample_without_replacement(3, 4, rng), InvalidInput);
}

TEST_CASE("sampling frequency matches k/n") {
  const std::size_t n = 10, k = 3;
  const int trials = 20000;
  std::vector<int> hits(n, 0);
  Rng rng(99);
  for (int t = 0; t < trials; ++t)
    for (auto i : sample_without_replacement(n, k, rng)) ++hits[i];
  const double p = double(k) / n, sigma = std::sqrt(trials * p * (1 - p));
  for (int h : hits) CHECK(std::abs(h - trials * p) < 4.0 * sigma);
}

}  // TEST_SUITE
