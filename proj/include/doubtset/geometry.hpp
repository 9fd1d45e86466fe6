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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace doubtset {

inline constexpr std::size_t kDefaultDistanceBatch = 256;

/// Row-major n x d matrix of finite reals. d >= 1, n may be 0.
class FeatureMatrix {
 public:
  explicit FeatureMatrix(std::size_t dims = 1);
  FeatureMatrix(std::size_t rows, std::size_t dims, std::vector<double> data);

  /// Builds from a list of equal-length points.
  static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t dims() const { return dims_; }
  bool empty() const { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dims_, dims_};
  }
  double at(std::size_t i, std::size_t k) const { return data_[i * dims_ + k]; }
  const std::vector<double>& data() const { return data_; }

  FeatureMatrix select(std::span<const std::size_t> indices) const;
  void append(std::span<const double> point);

 private:
  std::size_t rows_ = 0;
  std::size_t dims_ = 1;
  std::vector<double> data_;
};

struct DistanceMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

DistanceMatrix pairwise_distance(const FeatureMatrix& a, const FeatureMatrix& b);

/// Per-row distance from x_u to its nearest row of x_l, computed tile by tile
/// so only a batch_size x batch_size block of distances is ever live.
/// The result does not depend on batch_size.
std::vector<double> compute_min_delta(const FeatureMatrix& x_u, const FeatureMatrix& x_l,
                                      std::size_t batch_size = kDefaultDistanceBatch);

/// Maximum of the per-point minimum distances (the covering radius).
double core_set_radius(std::span<const double> min_delta);

FeatureMatrix read_features_csv(const std::string& path);
void write_features_csv(const std::string& path, const FeatureMatrix& features);
std::string features_header(std::size_t dims);

}  // namespace doubtset
