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

#include "doubtset/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "doubtset/csv.hpp"
#include "doubtset/error.hpp"
#include "doubtset/random.hpp"

namespace doubtset {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;
constexpr double kMinProbability = 1e-300;

void check_labels(std::span<const int> labels, std::size_t rows, std::size_t classes,
                  const char* op) {
  require(labels.size() == rows, std::string(op) + ": " + std::to_string(labels.size()) +
                                     " labels for " + std::to_string(rows) + " rows");
  for (int y : labels)
    require(y >= 0 && static_cast<std::size_t>(y) < classes,
            std::string(op) + ": label " + std::to_string(y) + " outside [0, " +
                std::to_string(classes) + ")");
}

// Log-softmax of the affine scores for one row, written into `out`.
void log_softmax(const Classifier& model, std::span<const double> x, std::vector<double>& out) {
  const std::size_t c_count = model.classes(), d = model.dims();
  out.resize(c_count);
  const auto& w = model.weights();
  for (std::size_t c = 0; c < c_count; ++c) {
    const double* wc = w.data() + c * (d + 1);
    double s = wc[d];
    for (std::size_t k = 0; k < d; ++k) s += wc[k] * x[k];
    out[c] = s;
  }
  const double peak = *std::max_element(out.begin(), out.end());
  double z = 0.0;
  for (double s : out) z += std::exp(s - peak);
  const double log_z = peak + std::log(z);
  for (double& s : out) s -= log_z;
}

std::size_t argmax_row(std::span<const double> r) {
  return static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
}

double train_accuracy(const Classifier& model, const FeatureMatrix& x, std::span<const int> y) {
  std::vector<double> lp;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    log_softmax(model, x.row(i), lp);
    if (argmax_row(lp) == static_cast<std::size_t>(y[i])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(x.rows());
}

}  // namespace

Optimizer parse_optimizer(std::string_view name) {
  if (name == "plain-gradient-descent" || name == "sgd") return Optimizer::kGradientDescent;
  if (name == "adaptive-moment" || name == "adam") return Optimizer::kAdam;
  throw InvalidInput("unknown optimizer '" + std::string(name) + "'");
}

std::string_view to_string(Optimizer optimizer) {
  return optimizer == Optimizer::kAdam ? "adaptive-moment" : "plain-gradient-descent";
}

void TrainConfig::validate() const {
  require(learning_rate > 0.0 && std::isfinite(learning_rate),
          "TrainConfig: learning_rate must be > 0");
  require(batch_size >= 1, "TrainConfig: batch_size must be >= 1");
  require(target_train_accuracy > 0.0 && target_train_accuracy <= 1.0,
          "TrainConfig: target_train_accuracy must lie in (0, 1]");
}

Classifier::Classifier(std::size_t classes, std::size_t dims)
    : Classifier(classes, dims, std::vector<double>(classes * (dims + 1), 0.0)) {}

Classifier::Classifier(std::size_t classes, std::size_t dims, std::vector<double> weights)
    : classes_(classes), dims_(dims), weights_(std::move(weights)) {
  require(classes >= 2, "Classifier: need at least 2 classes");
  require(dims >= 1, "Classifier: dims must be >= 1");
  require(weights_.size() == classes * (dims + 1), "Classifier: weight count mismatch");
  for (double w : weights_) require(std::isfinite(w), "Classifier: non-finite weight");
}

ProbabilityMatrix Classifier::predict_proba(const FeatureMatrix& features) const {
  require(features.dims() == dims_, "predict_proba: feature dims " +
                                        std::to_string(features.dims()) + " do not match model dims " +
                                        std::to_string(dims_));
  std::vector<double> values;
  values.reserve(features.rows() * classes_);
  std::vector<double> lp;
  for (std::size_t i = 0; i < features.rows(); ++i) {
    log_softmax(*this, features.row(i), lp);
    double sum = 0.0;
    const std::size_t start = values.size();
    for (double l : lp) {
      values.push_back(std::exp(l));
      sum += values.back();
    }
    for (std::size_t c = start; c < values.size(); ++c) values[c] /= sum;
  }
  return ProbabilityMatrix(features.rows(), classes_, std::move(values));
}

LossGradient loss_and_gradient(const Classifier& model, const FeatureMatrix& features,
                               std::span<const int> labels, std::span<const std::size_t> rows) {
  require(features.dims() == model.dims(), "loss_and_gradient: dimension mismatch");
  check_labels(labels, features.rows(), model.classes(), "loss_and_gradient");
  const std::size_t d = model.dims(), c_count = model.classes();
  const std::size_t count = rows.empty() ? features.rows() : rows.size();
  require(count > 0, "loss_and_gradient: no rows");

  LossGradient out{0.0, std::vector<double>(model.weights().size(), 0.0)};
  std::vector<double> lp;
  for (std::size_t r = 0; r < count; ++r) {
    const std::size_t i = rows.empty() ? r : rows[r];
    const auto x = features.row(i);
    const auto y = static_cast<std::size_t>(labels[i]);
    log_softmax(model, x, lp);
    out.loss -= lp[y];
    for (std::size_t c = 0; c < c_count; ++c) {
      const double residual = std::exp(lp[c]) - (c == y ? 1.0 : 0.0);
      double* g = out.gradient.data() + c * (d + 1);
      for (std::size_t k = 0; k < d; ++k) g[k] += residual * x[k];
      g[d] += residual;
    }
  }
  const double scale = 1.0 / static_cast<double>(count);
  out.loss *= scale;
  for (double& g : out.gradient) g *= scale;
  return out;
}

Classifier train(const FeatureMatrix& features, std::span<const int> labels, std::size_t classes,
                 const TrainConfig& config) {
  config.validate();
  require(!features.empty(), "train: empty training set");
  check_labels(labels, features.rows(), classes, "train");

  Classifier model(classes, features.dims());
  std::vector<std::size_t> per_class(classes, 0);
  for (int y : labels) ++per_class[static_cast<std::size_t>(y)];
  for (std::size_t c = 0; c < classes; ++c)
    if (per_class[c] == 0)
      model.warnings.push_back("class " + std::to_string(c) + " absent from training labels");

  const std::size_t n = features.rows();
  const std::size_t batch = std::min(config.batch_size, n);
  std::vector<double> m(model.weights().size(), 0.0), v(model.weights().size(), 0.0);
  std::size_t step = 0;
  Rng rng(config.seed);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = permutation(n, rng);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(start + batch, n);
      const std::span<const std::size_t> rows(order.data() + start, stop - start);
      const auto grad = loss_and_gradient(model, features, labels, rows).gradient;
      auto& w = model.mutable_weights();
      ++step;
      if (config.optimizer == Optimizer::kGradientDescent) {
        for (std::size_t k = 0; k < w.size(); ++k) w[k] -= config.learning_rate * grad[k];
      } else {
        const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
        for (std::size_t k = 0; k < w.size(); ++k) {
          m[k] = kAdamBeta1 * m[k] + (1.0 - kAdamBeta1) * grad[k];
          v[k] = kAdamBeta2 * v[k] + (1.0 - kAdamBeta2) * grad[k] * grad[k];
          w[k] -= config.learning_rate * (m[k] / c1) / (std::sqrt(v[k] / c2) + kAdamEpsilon);
        }
      }
    }
    const double loss = loss_and_gradient(model, features, labels).loss;
    const double accuracy = train_accuracy(model, features, labels);
    model.training_log.push_back({epoch + 1, loss, accuracy});
    if (accuracy >= config.target_train_accuracy) break;
  }
  return model;
}

Evaluation evaluate(const Classifier& model, const FeatureMatrix& features,
                    std::span<const int> labels) {
  require(features.dims() == model.dims(), "evaluate: dimension mismatch");
  require(!features.empty(), "evaluate: empty evaluation set");
  check_labels(labels, features.rows(), model.classes(), "evaluate");
  Evaluation e;
  std::vector<double> lp;
  for (std::size_t i = 0; i < features.rows(); ++i) {
    log_softmax(model, features.row(i), lp);
    const auto y = static_cast<std::size_t>(labels[i]);
    if (argmax_row(lp) == y) e.accuracy += 1.0;
    e.mean_cross_entropy -= lp[y];
  }
  const double n = static_cast<double>(features.rows());
  e.accuracy /= n;
  e.mean_cross_entropy /= n;
  return e;
}

Evaluation evaluate(const ProbabilityMatrix& probabilities, std::span<const int> labels) {
  require(probabilities.rows() > 0, "evaluate: empty evaluation set");
  check_labels(labels, probabilities.rows(), probabilities.classes(), "evaluate");
  Evaluation e;
  for (std::size_t i = 0; i < probabilities.rows(); ++i) {
    const auto r = probabilities.row(i);
    const auto y = static_cast<std::size_t>(labels[i]);
    if (argmax_row(r) == y) e.accuracy += 1.0;
    e.mean_cross_entropy -= std::log(std::max(r[y], kMinProbability));
  }
  const double n = static_cast<double>(probabilities.rows());
  e.accuracy /= n;
  e.mean_cross_entropy /= n;
  return e;
}

void save_classifier_csv(const std::string& path, const Classifier& model) {
  std::string out = "class";
  for (std::size_t k = 0; k < model.dims(); ++k) out += ",w" + std::to_string(k);
  out += ",bias\n";
  for (std::size_t c = 0; c < model.classes(); ++c) {
    out += std::to_string(c);
    for (std::size_t k = 0; k <= model.dims(); ++k)
      out += ',' + csv::format(model.weights()[c * (model.dims() + 1) + k]);
    out += '\n';
  }
  csv::write_file(path, out);
}

Classifier load_classifier_csv(const std::string& path) {
  const auto table = csv::read(path);
  require(table.header.size() >= 3 && table.header.front() == "class" &&
              table.header.back() == "bias",
          path + ": expected header class,w0..w{d-1},bias");
  const std::size_t dims = table.header.size() - 2;
  for (std::size_t k = 0; k < dims; ++k)
    require(table.header[k + 1] == "w" + std::to_string(k), path + ": bad weight column name");
  const std::size_t classes = table.rows.size();
  std::vector<double> weights(classes * (dims + 1));
  std::vector<bool> seen(classes, false);
  for (const auto& row : table.rows) {
    const long long c = csv::parse_int(row[0]);
    require(c >= 0 && static_cast<std::size_t>(c) < classes && !seen[static_cast<std::size_t>(c)],
            path + ": class ids must be 0..C-1, each once");
    seen[static_cast<std::size_t>(c)] = true;
    for (std::size_t k = 0; k <= dims; ++k)
      weights[static_cast<std::size_t>(c) * (dims + 1) + k] = csv::parse_double(row[k + 1]);
  }
  return Classifier(classes, dims, std::move(weights));
}

}  // namespace doubtset
