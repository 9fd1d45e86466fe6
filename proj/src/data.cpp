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

#include "doubtset/data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "doubtset/csv.hpp"
#include "doubtset/error.hpp"
#include "doubtset/random.hpp"

namespace doubtset {

void LabeledDataset::validate() const {
  require(labels.size() == features.rows(), "LabeledDataset: label count does not match rows");
  for (int y : labels)
    require(y >= 0 && static_cast<std::size_t>(y) < classes, "LabeledDataset: label out of range");
}

int quadrant_label(double x1, double x2) {
  const bool right = x1 >= 0.0, up = x2 >= 0.0;
  if (right && up) return 0;
  if (!right && up) return 1;
  if (!right && !up) return 2;
  return 3;
}

LabeledDataset gen_quadrants(std::size_t n, std::uint64_t seed) {
  require(n >= 4, "gen_quadrants: need n >= 4");
  Rng rng(seed);
  std::vector<double> data(2 * n);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    data[2 * i] = rng.uniform(-1.0, 1.0);
    data[2 * i + 1] = rng.uniform(-1.0, 1.0);
    labels[i] = quadrant_label(data[2 * i], data[2 * i + 1]);
  }
  return {FeatureMatrix(n, 2, std::move(data)), std::move(labels), 4};
}

LabeledDataset gen_gaussian_clusters(const std::vector<std::vector<double>>& centers, double stddev,
                                     std::size_t per_cluster,
                                     const std::vector<int>& labels_per_cluster,
                                     std::uint64_t seed) {
  require(!centers.empty(), "gen_gaussian_clusters: no centers");
  require(centers.size() == labels_per_cluster.size(),
          "gen_gaussian_clusters: centers and labels_per_cluster differ in length");
  require(stddev > 0.0 && std::isfinite(stddev), "gen_gaussian_clusters: std must be > 0");
  const std::size_t dims = centers.front().size();
  require(dims >= 1, "gen_gaussian_clusters: centers must have >= 1 dimension");
  for (const auto& c : centers)
    require(c.size() == dims, "gen_gaussian_clusters: centers differ in dimension");
  for (int y : labels_per_cluster) require(y >= 0, "gen_gaussian_clusters: negative label");

  Rng rng(seed);
  std::vector<double> data;
  data.reserve(centers.size() * per_cluster * dims);
  std::vector<int> labels;
  labels.reserve(centers.size() * per_cluster);
  for (std::size_t k = 0; k < centers.size(); ++k) {
    for (std::size_t i = 0; i < per_cluster; ++i) {
      for (std::size_t j = 0; j < dims; ++j) data.push_back(centers[k][j] + stddev * rng.normal());
      labels.push_back(labels_per_cluster[k]);
    }
  }
  const int top = *std::max_element(labels_per_cluster.begin(), labels_per_cluster.end());
  LabeledDataset out{FeatureMatrix(labels.size(), dims, std::move(data)), std::move(labels),
                     static_cast<std::size_t>(std::max(top + 1, 2))};
  return out;
}

ClusterLayout ring_cluster_layout(std::size_t classes, std::size_t clusters_per_class,
                                  double radius) {
  require(classes >= 2 && clusters_per_class >= 1, "ring_cluster_layout: degenerate layout");
  const std::size_t total = classes * clusters_per_class;
  ClusterLayout layout;
  for (std::size_t k = 0; k < total; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(total);
    layout.centers.push_back({radius * std::cos(angle), radius * std::sin(angle)});
    layout.labels.push_back(static_cast<int>(k / clusters_per_class));
  }
  return layout;
}

std::size_t test_set_size(std::size_t n, double test_fraction) {
  return static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
}

Split split(const LabeledDataset& dataset, const SplitSpec& spec) {
  require(spec.test_fraction > 0.0 && spec.test_fraction < 1.0,
          "split: test_fraction must lie in (0, 1)");
  const std::size_t n = dataset.size();
  const std::size_t n_test = test_set_size(n, spec.test_fraction);
  const std::size_t train = n - n_test;
  require(spec.initial_labeled <= train,
          "split: initial_labeled " + std::to_string(spec.initial_labeled) +
              " exceeds the training pool of " + std::to_string(train));

  Rng rng(spec.seed);
  const auto perm = permutation(n, rng);
  Split out;
  out.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
  out.labeled.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test),
                     perm.begin() + static_cast<std::ptrdiff_t>(n_test + spec.initial_labeled));
  out.unlabeled.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test + spec.initial_labeled),
                       perm.end());
  std::sort(out.test.begin(), out.test.end());
  std::sort(out.labeled.begin(), out.labeled.end());
  std::sort(out.unlabeled.begin(), out.unlabeled.end());
  return out;
}

LabeledDataset read_dataset_csv(const std::string& path) {
  const auto table = csv::read(path);
  require(table.header.size() >= 2 && table.header.back() == "label",
          path + ": expected header f0..f{d-1},label");
  const std::size_t dims = table.header.size() - 1;
  for (std::size_t k = 0; k < dims; ++k)
    require(table.header[k] == "f" + std::to_string(k),
            path + ": expected header column f" + std::to_string(k));
  std::vector<double> data;
  std::vector<int> labels;
  int top = 1;
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < dims; ++k) data.push_back(csv::parse_double(row[k]));
    const long long y = csv::parse_int(row[dims]);
    require(y >= 0 && y < (1LL << 30), path + ": label out of range");
    labels.push_back(static_cast<int>(y));
    top = std::max(top, static_cast<int>(y));
  }
  LabeledDataset out{FeatureMatrix(labels.size(), dims, std::move(data)), std::move(labels),
                     static_cast<std::size_t>(top + 1)};
  out.validate();
  return out;
}

void write_dataset_csv(const std::string& path, const LabeledDataset& dataset) {
  std::string out = features_header(dataset.features.dims()) + ",label\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (std::size_t k = 0; k < dataset.features.dims(); ++k)
      out += csv::format(dataset.features.at(i, k)) + ',';
    out += std::to_string(dataset.labels[i]) + '\n';
  }
  csv::write_file(path, out);
}

void write_split_csv(const std::string& path, const Split& split) {
  std::vector<std::pair<std::size_t, const char*>> rows;
  for (std::size_t i : split.labeled) rows.emplace_back(i, "labeled");
  for (std::size_t i : split.unlabeled) rows.emplace_back(i, "unlabeled");
  for (std::size_t i : split.test) rows.emplace_back(i, "test");
  std::sort(rows.begin(), rows.end());
  std::string out = "index,role\n";
  for (const auto& [i, role] : rows) out += std::to_string(i) + ',' + role + '\n';
  csv::write_file(path, out);
}

Split read_split_csv(const std::string& path) {
  const auto table = csv::read(path);
  const std::size_t idx = table.column("index"), role = table.column("role");
  Split out;
  for (const auto& row : table.rows) {
    const long long i = csv::parse_int(row[idx]);
    require(i >= 0, path + ": negative index");
    const auto u = static_cast<std::size_t>(i);
    if (row[role] == "labeled") out.labeled.push_back(u);
    else if (row[role] == "unlabeled") out.unlabeled.push_back(u);
    else if (row[role] == "test") out.test.push_back(u);
    else throw InvalidInput(path + ": unknown role '" + row[role] + "'");
  }
  return out;
}

}  // namespace doubtset
