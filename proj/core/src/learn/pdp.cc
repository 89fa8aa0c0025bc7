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

#include "plateaudit/learn/pdp.h"

#include "plateaudit/core/error.h"
#include "plateaudit/core/io.h"

namespace plateaudit::learn {

PdpCurve PartialDependence(const LogisticModel& model, const Eigen::MatrixXd& x,
                           int feature, int grid_size, int positive_class) {
  if (feature < 0 || feature >= x.cols()) {
    throw Error(ErrorCode::kInput, "PDP feature index out of range");
  }
  if (x.rows() < 1) throw Error(ErrorCode::kInput, "PDP needs at least one row");
  if (grid_size < 2) throw Error(ErrorCode::kInput, "PDP grid needs >= 2 points");
  if (positive_class < 0) positive_class = model.num_classes() - 1;
  if (positive_class >= model.num_classes()) {
    throw Error(ErrorCode::kInput, "PDP positive class out of range");
  }
  PdpCurve curve;
  curve.feature = feature;
  curve.feature_name = feature < model.input_dim() ? model.feature_names[feature] : "";
  curve.positive_class = positive_class;
  const double lo = x.col(feature).minCoeff();
  const double hi = x.col(feature).maxCoeff();
  if (!(hi > lo)) {
    curve.constant_feature = true;
    curve.grid = {lo};
  } else {
    for (int g = 0; g < grid_size; ++g) {
      // Endpoints are exact.
      curve.grid.push_back(g + 1 == grid_size ? hi : lo + (hi - lo) * g / (grid_size - 1));
    }
  }
  Eigen::MatrixXd probe = x;
  for (const double v : curve.grid) {
    probe.col(feature).setConstant(v);
    curve.probability.push_back(PredictProba(model, probe).col(positive_class).mean());
  }
  return curve;
}

std::string PdpToCsv(const PdpCurve& curve) {
  std::string out = "grid,probability\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out += FormatSignificant(curve.grid[i], 9) + "," +
           FormatSignificant(curve.probability[i], 9) + "\n";
  }
  return out;
}

}  // namespace plateaudit::learn
