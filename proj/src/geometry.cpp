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

#include "doubtset/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "doubtset/csv.hpp"
#include "doubtset/error.hpp"

namespace doubtset {

FeatureMatrix::FeatureMatrix(std::size_t dims) : dims_(dims) {
  require(dims >= 1, "FeatureMatrix: dims must be >= 1");
}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t dims, std::vector<double> data)
    : rows_(rows), dims_(dims), data_(std::move(data)) {
  require(dims >= 1, "FeatureMatrix: dims must be >= 1");
  require(data_.size() == rows * dims, "FeatureMatrix: data size does not match rows * dims");
  for (double v : data_) require(std::isfinite(v), "FeatureMatrix: non-finite entry");
}

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  require(!rows.empty(), "FeatureMatrix::from_rows: no rows (dims unknown)");
  const std::size_t dims = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * dims);
  for (const auto& r : rows) {
    require(r.size() == dims, "FeatureMatrix::from_rows: ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return FeatureMatrix(rows.size(), dims, std::move(data));
}

FeatureMatrix FeatureMatrix::select(std::span<const std::size_t> indices) const {
  std::vector<double> data;
  data.reserve(indices.size() * dims_);
  for (std::size_t i : indices) {
    require(i < rows_, "FeatureMatrix::select: index out of range");
    const auto r = row(i);
    data.insert(data.end(), r.begin(), r.end());
  }
  return FeatureMatrix(indices.size(), dims_, std::move(data));
}

void FeatureMatrix::append(std::span<const double> point) {
  require(point.size() == dims_, "FeatureMatrix::append: dimension mismatch");
  for (double v : point) require(std::isfinite(v), "FeatureMatrix::append: non-finite entry");
  data_.insert(data_.end(), point.begin(), point.end());
  ++rows_;
}

// Sum of squared differences rather than |a|^2 + |b|^2 - 2ab: identical rows
// give exactly 0 and the result is never negative.
double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sum += diff * diff;
  }
  return sum;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

DistanceMatrix pairwise_distance(const FeatureMatrix& a, const FeatureMatrix& b) {
  require(a.dims() == b.dims(), "pairwise_distance: dimension mismatch (" +
                                    std::to_string(a.dims()) + " vs " +
                                    std::to_string(b.dims()) + ")");
  DistanceMatrix out{a.rows(), b.rows(), std::vector<double>(a.rows() * b.rows())};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j)
      out.values[i * out.cols + j] = distance(a.row(i), b.row(j));
  return out;
}

std::vector<double> compute_min_delta(const FeatureMatrix& x_u, const FeatureMatrix& x_l,
                                      std::size_t batch_size) {
  require(batch_size >= 1, "compute_min_delta: batch_size must be >= 1");
  require(!x_l.empty(), "compute_min_delta: labeled pool is empty");
  require(x_u.dims() == x_l.dims(), "compute_min_delta: dimension mismatch");

  const std::size_t n_u = x_u.rows();
  const std::size_t n_l = x_l.rows();
  std::vector<double> min_delta(n_u, std::numeric_limits<double>::infinity());
  std::vector<double> tile(batch_size * batch_size);

  for (std::size_t i0 = 0; i0 < n_u; i0 += batch_size) {
    const std::size_t i1 = std::min(i0 + batch_size, n_u);
    for (std::size_t j0 = 0; j0 < n_l; j0 += batch_size) {
      const std::size_t j1 = std::min(j0 + batch_size, n_l);
      const std::size_t width = j1 - j0;
      for (std::size_t i = i0; i < i1; ++i)
        for (std::size_t j = j0; j < j1; ++j)
          tile[(i - i0) * width + (j - j0)] = squared_distance(x_u.row(i), x_l.row(j));
      for (std::size_t i = i0; i < i1; ++i) {
        const double* first = tile.data() + (i - i0) * width;
        const double tile_min = *std::min_element(first, first + width);
        min_delta[i] = std::min(min_delta[i], std::sqrt(tile_min));
      }
    }
  }
  return min_delta;
}

double core_set_radius(std::span<const double> min_delta) {
  require(!min_delta.empty(), "core_set_radius: no unlabeled points, radius undefined");
  return *std::max_element(min_delta.begin(), min_delta.end());
}

std::string features_header(std::size_t dims) {
  std::string header;
  for (std::size_t k = 0; k < dims; ++k) {
    if (k) header += ',';
    header += 'f' + std::to_string(k);
  }
  return header;
}

FeatureMatrix read_features_csv(const std::string& path) {
  const auto table = csv::read(path);
  const std::size_t dims = table.header.size();
  require(dims >= 1, path + ": no feature columns");
  for (std::size_t k = 0; k < dims; ++k)
    require(table.header[k] == "f" + std::to_string(k),
            path + ": expected header column f" + std::to_string(k));
  std::vector<double> data;
  data.reserve(table.rows.size() * dims);
  for (const auto& row : table.rows)
    for (const auto& cell : row) data.push_back(csv::parse_double(cell));
  return FeatureMatrix(table.rows.size(), dims, std::move(data));
}

void write_features_csv(const std::string& path, const FeatureMatrix& features) {
  std::string out = features_header(features.dims()) + '\n';
  for (std::size_t i = 0; i < features.rows(); ++i) {
    for (std::size_t k = 0; k < features.dims(); ++k) {
      if (k) out += ',';
      out += csv::format(features.at(i, k));
    }
    out += '\n';
  }
  csv::write_file(path, out);
}

}  // namespace doubtset
