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
#include <cstdint>
#include <string>
#include <vector>

#include "doubtset/geometry.hpp"

namespace doubtset {

struct LabeledDataset {
  FeatureMatrix features;
  std::vector<int> labels;
  std::size_t classes = 0;

  void validate() const;
  std::size_t size() const { return labels.size(); }
};

/// Quadrant index of a point: 0 for (+,+), then counterclockwise. Zero
/// coordinates count as positive.
int quadrant_label(double x1, double x2);

/// n points uniform on [-1, 1]^2 labelled by quadrant.
LabeledDataset gen_quadrants(std::size_t n, std::uint64_t seed);

/// Isotropic Gaussian blobs; cluster k gets labels_per_cluster[k].
LabeledDataset gen_gaussian_clusters(const std::vector<std::vector<double>>& centers, double stddev,
                                     std::size_t per_cluster,
                                     const std::vector<int>& labels_per_cluster,
                                     std::uint64_t seed);

struct ClusterLayout {
  std::vector<std::vector<double>> centers;
  std::vector<int> labels;
};

/// classes * clusters_per_class centers evenly spaced on a circle; adjacent
/// centers share a class, so each class occupies one angular wedge.
ClusterLayout ring_cluster_layout(std::size_t classes = 4, std::size_t clusters_per_class = 2,
                                  double radius = 5.0);

struct SplitSpec {
  std::size_t initial_labeled = 100;
  double test_fraction = 0.25;
  std::uint64_t seed = 0;
};

struct Split {
  std::vector<std::size_t> labeled;
  std::vector<std::size_t> unlabeled;
  std::vector<std::size_t> test;
};

/// Uniform disjoint partition. Each list is returned in ascending order.
Split split(const LabeledDataset& dataset, const SplitSpec& spec);
std::size_t test_set_size(std::size_t n, double test_fraction);

LabeledDataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const LabeledDataset& dataset);
void write_split_csv(const std::string& path, const Split& split);
Split read_split_csv(const std::string& path);

}  // namespace doubtset
