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

#ifndef PLATEAUDIT_AUDIT_DISEASE_H_
#define PLATEAUDIT_AUDIT_DISEASE_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "plateaudit/core/types.h"
#include "plateaudit/features/table.h"
#include "plateaudit/learn/folds.h"
#include "plateaudit/learn/pdp.h"

namespace plateaudit::audit {

enum class ModelFamily { kFull, kDensityOnly, kExternal };
std::string_view ToString(ModelFamily family);
ModelFamily ParseModelFamily(std::string_view text);

struct DiseaseOptions {
  double lambda = 1e-2;
  int threads = 1;
  // Column used by the density-only family.
  std::string density_feature = "f060";
};

struct FoldResult {
  int fold_id = 0;
  std::map<std::string, std::string> annotations;
  bool skipped = false;
  std::string error;
  int train_rows = 0;
  int test_rows = 0;
  double auc = 0.0;
};

struct DiseaseAuditResult {
  ModelFamily family = ModelFamily::kFull;
  std::string scheme;
  std::vector<FoldResult> folds;
  int evaluated = 0;
  double median_auc = 0.0;
  int worst_fold = -1;
  double worst_auc = 0.0;
  // Minimum-AUC fold tests a same-source pair and scores below 0.5.
  bool covariate_coincidence = false;
};

// Experimental (non-control) rows as fold units; lines reconstructed from
// row metadata.
std::vector<learn::FoldUnit> FoldUnitsFromTable(const features::FeatureTable& table);
std::vector<CellLine> LinesFromTable(const features::FeatureTable& table);

// Trains P(disease) per fold on the train keys and scores AUC on the test
// keys. Folds with a single training class, or a single test class, are
// recorded as skipped with the error. Per-fold results do not depend on
// execution order or thread count.
DiseaseAuditResult DiseaseAudit(const features::FeatureTable& table,
                                const std::vector<learn::FoldSpec>& folds, ModelFamily family,
                                const DiseaseOptions& options = {});

struct DensityCheckResult {
  DiseaseAuditResult full;
  DiseaseAuditResult density_only;
  // density_only AUC minus full AUC, for folds evaluated by both.
  std::map<int, double> auc_delta;
  bool confound = false;
  // P(disease) of a density-only model fit on all experimental rows as the
  // density feature sweeps its range.
  learn::PdpCurve density_pdp;
};

// Flags a confound when median(density_only) >= median(full) - 0.05 and
// median(full) > 0.6.
DensityCheckResult DensityConfoundCheck(const features::FeatureTable& table,
                                        const std::vector<learn::FoldSpec>& folds,
                                        const DiseaseOptions& options = {});

inline constexpr double kDensityGap = 0.05;
inline constexpr double kDensityFullGate = 0.6;

}  // namespace plateaudit::audit

#endif  // PLATEAUDIT_AUDIT_DISEASE_H_
