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

// Shared fixtures for the unit tests.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doubtset/geometry.hpp"
#include "doubtset/random.hpp"

namespace testing {

inline doubtset::FeatureMatrix random_matrix(std::size_t rows, std::size_t dims,
                                             doubtset::Rng& rng, double scale = 1.0) {
  std::vector<double> data(rows * dims);
  for (double& v : data) v = rng.uniform(-scale, scale);
  return doubtset::FeatureMatrix(rows, dims, std::move(data));
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("doubtset_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

// Naive Euclidean distance, written independently of the library.
inline double naive_distance(const doubtset::FeatureMatrix& a, std::size_t i,
                             const doubtset::FeatureMatrix& b, std::size_t j) {
  long double s = 0.0L;
  for (std::size_t k = 0; k < a.dims(); ++k) {
    const long double d = static_cast<long double>(a.at(i, k)) - b.at(j, k);
    s += d * d;
  }
  return static_cast<double>(std::sqrt(s));
}

inline double naive_radius(const doubtset::FeatureMatrix& x_u, const doubtset::FeatureMatrix& x_l) {
  double radius = 0.0;
  for (std::size_t i = 0; i < x_u.rows(); ++i) {
    double best = INFINITY;
    for (std::size_t j = 0; j < x_l.rows(); ++j) best = std::fmin(best, naive_distance(x_u, i, x_l, j));
    radius = std::fmax(radius, best);
  }
  return radius;
}

inline double rel_diff(double a, double b) {
  const double scale = std::fmax(std::fabs(a), std::fabs(b));
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

}  // namespace testing
