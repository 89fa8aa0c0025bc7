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

#ifndef PLATEAUDIT_LEARN_LOGISTIC_H_
#define PLATEAUDIT_LEARN_LOGISTIC_H_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace plateaudit::learn {

struct LogisticOptions {
  // L2 penalty on the weights (not the intercepts).
  double lambda = 1e-2;
  int max_iter = 500;
  // Convergence threshold on the infinity norm of the gradient.
  double tol = 1e-6;
};

struct ConvergenceRecord {
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  // Objective at the start and after every accepted step.
  std::vector<double> loss_history;
};

// Multinomial logistic regression over internally standardized features.
struct LogisticModel {
  std::vector<std::string> classes;
  // Names of all input columns, in input order.
  std::vector<std::string> feature_names;
  // Input columns that survived the zero-variance filter.
  std::vector<int> kept_features;
  std::vector<std::string> dropped_features;
  Eigen::VectorXd mean;   // per kept feature
  Eigen::VectorXd scale;  // per kept feature
  Eigen::MatrixXd weights;     // kept x K
  Eigen::VectorXd intercepts;  // K
  double lambda = 0.0;
  ConvergenceRecord convergence;

  int input_dim() const { return static_cast<int>(feature_names.size()); }
  int num_classes() const { return static_cast<int>(classes.size()); }
};

struct Objective {
  double loss = 0.0;
  Eigen::MatrixXd grad_weights;
  Eigen::VectorXd grad_intercepts;
};

// Mean multinomial cross-entropy plus (lambda / 2) * ||W||^2 and its gradient.
// `z` holds already-standardized features.
Objective LogisticObjective(const Eigen::MatrixXd& z, std::span<const int> y,
                            const Eigen::MatrixXd& weights,
                            const Eigen::VectorXd& intercepts, double lambda);

// Full-batch gradient descent with Barzilai-Borwein trial steps and Armijo
// backtracking (c = 1e-4). `y` holds class indices into `classes`. Throws
// Error(kDegenerateInput) when fewer than two classes occur and
// Error(kInput) on non-finite features or shape mismatches.
LogisticModel TrainLogistic(const Eigen::MatrixXd& x, std::span<const int> y,
                            std::vector<std::string> classes,
                            const LogisticOptions& options = {},
                            std::vector<std::string> feature_names = {});

// n x K softmax probabilities. Throws Error(kSchema) when the column count
// differs from the training schema.
Eigen::MatrixXd PredictProba(const LogisticModel& model, const Eigen::MatrixXd& x);

// Same, but columns are matched by name; missing names are listed in the
// error.
Eigen::MatrixXd PredictProbaNamed(const LogisticModel& model,
                                  const Eigen::MatrixXd& x,
                                  std::span<const std::string> column_names);

// Row-wise argmax; ties go to the lowest class index.
std::vector<int> ArgmaxRows(const Eigen::MatrixXd& probabilities);

std::string LogisticModelToJson(const LogisticModel& model);
LogisticModel LogisticModelFromJson(const std::string& text);

}  // namespace plateaudit::learn

#endif  // PLATEAUDIT_LEARN_LOGISTIC_H_
