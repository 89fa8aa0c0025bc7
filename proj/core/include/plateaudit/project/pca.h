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

#ifndef PLATEAUDIT_PROJECT_PCA_H_
#define PLATEAUDIT_PROJECT_PCA_H_

#include <Eigen/Dense>

namespace plateaudit::project {

struct PcaResult {
  // n x k scores of the centered input.
  Eigen::MatrixXd projected;
  // d x k orthonormal loadings; each column's largest-magnitude entry is
  // positive.
  Eigen::MatrixXd components;
  Eigen::RowVectorXd mean;
  // Fraction of total variance per component, descending.
  Eigen::VectorXd explained_ratio;
};

// Eigendecomposition of the sample covariance. Throws Error(kInput) unless
// n >= 2 and 1 <= k <= min(n, d), Error(kDegenerateInput) for zero variance.
PcaResult Pca(const Eigen::MatrixXd& x, int k);

// Maps scores back to input space.
Eigen::MatrixXd PcaReconstruct(const PcaResult& pca);

}  // namespace plateaudit::project

#endif  // PLATEAUDIT_PROJECT_PCA_H_
