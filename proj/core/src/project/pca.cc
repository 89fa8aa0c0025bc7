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

#include "plateaudit/project/pca.h"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "plateaudit/core/error.h"

namespace plateaudit::project {

PcaResult Pca(const Eigen::MatrixXd& x, int k) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n < 2 || k < 1 || k > std::min(n, d)) {
    throw Error(ErrorCode::kInput, "pca needs n >= 2 and 1 <= k <= min(n, d); got n=" +
                                       std::to_string(n) + " d=" + std::to_string(d) +
                                       " k=" + std::to_string(k));
  }
  if (!x.allFinite()) throw Error(ErrorCode::kInput, "pca input has non-finite values");
  PcaResult out;
  out.mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - out.mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
  const double total = cov.trace();
  if (!(total > 1e-300)) {
    throw Error(ErrorCode::kDegenerateInput, "pca input has zero variance");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kConvergence, "covariance eigendecomposition failed");
  }
  std::vector<Eigen::Index> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return eig.eigenvalues()(a) > eig.eigenvalues()(b);
  });
  out.components.resize(d, k);
  out.explained_ratio.resize(k);
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd v = eig.eigenvectors().col(order[c]);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    out.components.col(c) = v;
    out.explained_ratio(c) = std::max(0.0, eig.eigenvalues()(order[c])) / total;
  }
  out.projected = centered * out.components;
  return out;
}

Eigen::MatrixXd PcaReconstruct(const PcaResult& pca) {
  return (pca.projected * pca.components.transpose()).rowwise() + pca.mean;
}

}  // namespace plateaudit::project
