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

// Multinomial logistic regression: the probabilistic classifier that supplies
// P(y|x) to the acquisition strategies.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "doubtset/geometry.hpp"
#include "doubtset/selection.hpp"

namespace doubtset {

enum class Optimizer { kGradientDescent, kAdam };

Optimizer parse_optimizer(std::string_view name);
std::string_view to_string(Optimizer optimizer);

struct TrainConfig {
  double learning_rate = 0.05;
  std::size_t epochs = 300;
  std::size_t batch_size = 64;
  Optimizer optimizer = Optimizer::kAdam;
  double target_train_accuracy = 0.99;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochLog {
  std::size_t epoch = 0;
  double loss = 0.0;
  double accuracy = 0.0;
};

class Classifier {
 public:
  /// Zero weights: predicts the uniform distribution everywhere.
  Classifier(std::size_t classes, std::size_t dims);
  /// `weights` is classes x (dims + 1), row-major, bias in the last column.
  Classifier(std::size_t classes, std::size_t dims, std::vector<double> weights);

  std::size_t classes() const { return classes_; }
  std::size_t dims() const { return dims_; }
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double>& mutable_weights() { return weights_; }

  double weight(std::size_t c, std::size_t k) const { return weights_[c * (dims_ + 1) + k]; }
  double bias(std::size_t c) const { return weights_[c * (dims_ + 1) + dims_]; }

  ProbabilityMatrix predict_proba(const FeatureMatrix& features) const;

  std::vector<EpochLog> training_log;
  std::vector<std::string> warnings;

 private:
  std::size_t classes_;
  std::size_t dims_;
  std::vector<double> weights_;
};

struct LossGradient {
  double loss = 0.0;                 // mean cross-entropy over the rows used
  std::vector<double> gradient;      // same layout as Classifier::weights()
};

/// Mean cross-entropy and its analytic gradient over `rows` (all rows if empty).
LossGradient loss_and_gradient(const Classifier& model, const FeatureMatrix& features,
                               std::span<const int> labels,
                               std::span<const std::size_t> rows = {});

/// Fits from zero weights; stops after `epochs` or once training accuracy
/// reaches the target.
Classifier train(const FeatureMatrix& features, std::span<const int> labels, std::size_t classes,
                 const TrainConfig& config);

struct Evaluation {
  double accuracy = 0.0;
  double mean_cross_entropy = 0.0;
};

Evaluation evaluate(const Classifier& model, const FeatureMatrix& features,
                    std::span<const int> labels);
Evaluation evaluate(const ProbabilityMatrix& probabilities, std::span<const int> labels);

void save_classifier_csv(const std::string& path, const Classifier& model);
Classifier load_classifier_csv(const std::string& path);

}  // namespace doubtset
