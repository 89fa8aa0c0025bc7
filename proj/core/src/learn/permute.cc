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

#include "plateaudit/learn/permute.h"

#include <numeric>
#include <string>
#include <vector>

#include "plateaudit/core/error.h"
#include "plateaudit/core/rng.h"

namespace plateaudit::learn {

Eigen::MatrixXd PermuteColumns(const Eigen::MatrixXd& x, uint64_t seed) {
  if (x.rows() < 2) throw Error(ErrorCode::kInput, "permutation needs >= 2 rows");
  Eigen::MatrixXd out(x.rows(), x.cols());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    std::iota(order.begin(), order.end(), 0);
    RngStream stream = RngStream::Derive(seed, {"permute", std::to_string(j)});
    stream.Shuffle(order);
    for (Eigen::Index i = 0; i < x.rows(); ++i) out(i, j) = x(order[i], j);
  }
  return out;
}

}  // namespace plateaudit::learn
