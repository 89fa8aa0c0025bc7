/*
 * Copyright 2026 The plateaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "testing/oracles.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "plateaudit/core/rng.h"

namespace plateaudit::testing {

double BruteForceAuc(std::span<const double> scores, std::span<const int> labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / pairs;
}

RandomProblem MakeRandomProblem(uint64_t seed, int n, int d, int k) {
  RngStream rng = RngStream::Derive(seed, {"oracle", "problem"});
  RandomProblem p;
  p.classes = k;
  p.x.resize(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) p.x(i, j) = rng.Normal();
  }
  for (int i = 0; i < n; ++i) p.y.push_back(i < k ? i : static_cast<int>(rng.UniformIndex(k)));
  return p;
}

double MaxGradientRelativeError(uint64_t seed, int n, int d, int k, double lambda,
                                double eps) {
  const RandomProblem p = MakeRandomProblem(seed, n, d, k);
  RngStream rng = RngStream::Derive(seed, {"oracle", "point"});
  Eigen::MatrixXd w(d, k);
  Eigen::VectorXd b(k);
  for (int j = 0; j < d; ++j) {
    for (int c = 0; c < k; ++c) w(j, c) = rng.Normal();
  }
  for (int c = 0; c < k; ++c) b(c) = rng.Normal();
  const learn::Objective analytic = learn::LogisticObjective(p.x, p.y, w, b, lambda);
  const auto loss = [&](const Eigen::MatrixXd& ww, const Eigen::VectorXd& bb) {
    return learn::LogisticObjective(p.x, p.y, ww, bb, lambda).loss;
  };
  const auto rel = [](double a, double f) {
    return std::abs(a - f) / std::max({std::abs(a), std::abs(f), 1e-6});
  };
  double worst = 0.0;
  for (int j = 0; j < d; ++j) {
    for (int c = 0; c < k; ++c) {
      Eigen::MatrixXd plus = w, minus = w;
      plus(j, c) += eps;
      minus(j, c) -= eps;
      const double fd = (loss(plus, b) - loss(minus, b)) / (2 * eps);
      worst = std::max(worst, rel(analytic.grad_weights(j, c), fd));
    }
  }
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd plus = b, minus = b;
    plus(c) += eps;
    minus(c) -= eps;
    const double fd = (loss(w, plus) - loss(w, minus)) / (2 * eps);
    worst = std::max(worst, rel(analytic.grad_intercepts(c), fd));
  }
  return worst;
}

learn::LogisticModel SingleFeatureModel(int dims, int feature, double a, double b) {
  learn::LogisticModel model;
  model.classes = {"0", "1"};
  for (int j = 0; j < dims; ++j) {
    model.feature_names.push_back("x" + std::to_string(j));
    model.kept_features.push_back(j);
  }
  model.mean = Eigen::VectorXd::Zero(dims);
  model.scale = Eigen::VectorXd::Ones(dims);
  model.weights = Eigen::MatrixXd::Zero(dims, 2);
  model.weights(feature, 1) = a;
  model.intercepts = Eigen::VectorXd::Zero(2);
  model.intercepts(1) = b;
  return model;
}

}  // namespace plateaudit::testing
