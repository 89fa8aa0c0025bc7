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

#ifndef PLATEAUDIT_LEARN_PERMUTE_H_
#define PLATEAUDIT_LEARN_PERMUTE_H_

#include <cstdint>

#include <Eigen/Dense>

namespace plateaudit::learn {

// Shuffles every column independently, each with its own stream
// (seed, "permute", column). Column multisets are preserved while row-wise
// joint structure is destroyed. Requires at least two rows.
Eigen::MatrixXd PermuteColumns(const Eigen::MatrixXd& x, uint64_t seed);

}  // namespace plateaudit::learn

#endif  // PLATEAUDIT_LEARN_PERMUTE_H_
