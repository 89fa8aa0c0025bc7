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

#ifndef PLATEAUDIT_LEARN_PDP_H_
#define PLATEAUDIT_LEARN_PDP_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "plateaudit/learn/logistic.h"

namespace plateaudit::learn {

struct PdpCurve {
  int feature = 0;
  std::string feature_name;
  int positive_class = 0;
  std::vector<double> grid;
  std::vector<double> probability;
  // Set when the feature is constant over X; the curve then has one point.
  bool constant_feature = false;
};

// Partial dependence of P(positive_class) on input column `feature`: for
// each of `grid_size` evenly spaced values spanning [min, max] of the column,
// the mean prediction with that column overwritten. positive_class < 0 picks
// the last class.
PdpCurve PartialDependence(const LogisticModel& model, const Eigen::MatrixXd& x,
                           int feature, int grid_size = 20,
                           int positive_class = -1);

// "grid,probability" CSV.
std::string PdpToCsv(const PdpCurve& curve);

}  // namespace plateaudit::learn

#endif  // PLATEAUDIT_LEARN_PDP_H_
