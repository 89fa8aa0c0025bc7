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

#include "plateaudit/audit/disease.h"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "plateaudit/core/error.h"
#include "plateaudit/core/parallel.h"
#include "plateaudit/learn/logistic.h"
#include "plateaudit/learn/metrics.h"

namespace plateaudit::audit {
namespace {

const std::vector<std::string> kConditionClasses = {"healthy", "disease"};

features::FeatureTable ExperimentalRows(const features::FeatureTable& table) {
  return table.Filter([](const features::FeatureRow& r) { return !r.meta.is_control; });
}

Eigen::MatrixXd FamilyMatrix(const features::FeatureTable& table, ModelFamily family,
                             const DiseaseOptions& options) {
  if (family != ModelFamily::kDensityOnly) return table.Matrix();
  const int column = table.FeatureIndex(options.density_feature);
  Eigen::MatrixXd x(table.size(), 1);
  for (int i = 0; i < table.size(); ++i) x(i, 0) = table.rows[i].values[column];
  return x;
}

int ConditionLabel(const features::RowMeta& meta) {
  if (meta.condition == "disease") return 1;
  if (meta.condition == "healthy") return 0;
  throw Error(ErrorCode::kInput, "unknown condition '" + meta.condition + "'");
}

}  // namespace

std::string_view ToString(ModelFamily family) {
  switch (family) {
    case ModelFamily::kFull: return "full";
    case ModelFamily::kDensityOnly: return "density_only";
    case ModelFamily::kExternal: return "external";
  }
  return "full";
}

ModelFamily ParseModelFamily(std::string_view text) {
  if (text == "full") return ModelFamily::kFull;
  if (text == "density_only") return ModelFamily::kDensityOnly;
  if (text == "external") return ModelFamily::kExternal;
  throw Error(ErrorCode::kInput, "model family must be full, density_only or external");
}

std::vector<learn::FoldUnit> FoldUnitsFromTable(const features::FeatureTable& table) {
  std::vector<learn::FoldUnit> units;
  for (const auto& r : table.rows) {
    if (!r.meta.is_control) units.push_back({r.key, r.meta.cell_line, r.meta.batch});
  }
  return units;
}

std::vector<CellLine> LinesFromTable(const features::FeatureTable& table) {
  std::map<std::string, CellLine> lines;
  for (const auto& r : table.rows) {
    if (r.meta.is_control) continue;
    CellLine line;
    line.id = r.meta.cell_line;
    line.subject_id = r.meta.cell_line;
    line.condition = ParseCondition(r.meta.condition);
    line.lab_source = ParseLabSource(r.meta.lab_source);
    const auto [it, inserted] = lines.emplace(line.id, line);
    if (!inserted && (it->second.condition != line.condition ||
                      it->second.lab_source != line.lab_source)) {
      throw Error(ErrorCode::kValidation,
                  "cell line " + line.id + " has inconsistent condition or lab source");
    }
  }
  std::vector<CellLine> out;
  for (auto& [id, line] : lines) out.push_back(std::move(line));
  return out;
}

DiseaseAuditResult DiseaseAudit(const features::FeatureTable& table,
                                const std::vector<learn::FoldSpec>& folds, ModelFamily family,
                                const DiseaseOptions& options) {
  const features::FeatureTable rows = ExperimentalRows(table);
  const Eigen::MatrixXd x = FamilyMatrix(rows, family, options);
  std::unordered_map<std::string, int> index;
  std::vector<int> y(rows.rows.size());
  for (int i = 0; i < rows.size(); ++i) {
    index.emplace(rows.rows[i].key, i);
    y[i] = ConditionLabel(rows.rows[i].meta);
  }
  const auto gather = [&](const std::vector<std::string>& keys, int fold) {
    std::vector<int> idx;
    idx.reserve(keys.size());
    for (const auto& k : keys) {
      const auto it = index.find(k);
      if (it == index.end()) {
        throw Error(ErrorCode::kJoin, "fold " + std::to_string(fold) + " key " + k +
                                          " is not an experimental row of the table");
      }
      idx.push_back(it->second);
    }
    return idx;
  };

  DiseaseAuditResult result;
  result.family = family;
  result.scheme = folds.empty() ? "" : std::string(learn::ToString(folds.front().scheme));
  result.folds.resize(folds.size());
  learn::LogisticOptions fit;
  fit.lambda = options.lambda;
  ParallelFor(folds.size(), options.threads, [&](std::size_t f) {
    const learn::FoldSpec& spec = folds[f];
    FoldResult& out = result.folds[f];
    out.fold_id = spec.id;
    out.annotations = spec.annotations;
    const std::vector<int> train = gather(spec.train_keys, spec.id);
    const std::vector<int> test = gather(spec.test_keys, spec.id);
    out.train_rows = static_cast<int>(train.size());
    out.test_rows = static_cast<int>(test.size());
    Eigen::MatrixXd x_train(out.train_rows, x.cols()), x_test(out.test_rows, x.cols());
    std::vector<int> y_train, y_test;
    for (int i = 0; i < out.train_rows; ++i) {
      x_train.row(i) = x.row(train[i]);
      y_train.push_back(y[train[i]]);
    }
    for (int i = 0; i < out.test_rows; ++i) {
      x_test.row(i) = x.row(test[i]);
      y_test.push_back(y[test[i]]);
    }
    try {
      const learn::LogisticModel model =
          learn::TrainLogistic(x_train, y_train, kConditionClasses, fit);
      const Eigen::MatrixXd p = learn::PredictProba(model, x_test);
      const Eigen::VectorXd disease = p.col(1);
      out.auc = learn::RocAuc(std::span(disease.data(), disease.size()), y_test);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateInput && e.code() != ErrorCode::kUndefinedMetric) {
        throw;
      }
      out.skipped = true;
      out.error = e.what();
    }
  });

  std::vector<double> aucs;
  for (std::size_t f = 0; f < result.folds.size(); ++f) {
    const FoldResult& fr = result.folds[f];
    if (fr.skipped) continue;
    aucs.push_back(fr.auc);
    if (result.worst_fold < 0 || fr.auc < result.worst_auc) {
      result.worst_fold = fr.fold_id;
      result.worst_auc = fr.auc;
    }
  }
  result.evaluated = static_cast<int>(aucs.size());
  if (!aucs.empty()) {
    result.median_auc = learn::Median(aucs);
    for (const FoldResult& fr : result.folds) {
      if (fr.skipped || fr.fold_id != result.worst_fold) continue;
      const auto it = fr.annotations.find("same_source");
      result.covariate_coincidence =
          it != fr.annotations.end() && it->second == "true" && fr.auc < 0.5;
    }
  }
  return result;
}

DensityCheckResult DensityConfoundCheck(const features::FeatureTable& table,
                                        const std::vector<learn::FoldSpec>& folds,
                                        const DiseaseOptions& options) {
  DensityCheckResult out;
  out.full = DiseaseAudit(table, folds, ModelFamily::kFull, options);
  out.density_only = DiseaseAudit(table, folds, ModelFamily::kDensityOnly, options);
  for (std::size_t f = 0; f < out.full.folds.size(); ++f) {
    const FoldResult& a = out.full.folds[f];
    const FoldResult& b = out.density_only.folds[f];
    if (!a.skipped && !b.skipped) out.auc_delta[a.fold_id] = b.auc - a.auc;
  }
  out.confound = out.full.evaluated > 0 && out.density_only.evaluated > 0 &&
                 out.density_only.median_auc >= out.full.median_auc - kDensityGap &&
                 out.full.median_auc > kDensityFullGate;

  const features::FeatureTable rows = ExperimentalRows(table);
  std::vector<int> y;
  for (const auto& r : rows.rows) y.push_back(ConditionLabel(r.meta));
  if (std::set<int>(y.begin(), y.end()).size() == 2) {
    learn::LogisticOptions fit;
    fit.lambda = options.lambda;
    // The density-only model: in the full model the density column shares
    // weight with collinear area and intensity features, so its PDP sign is
    // not identifiable.
    const int column = rows.FeatureIndex(options.density_feature);
    const Eigen::MatrixXd x = rows.Matrix().col(column);
    const learn::LogisticModel model =
        learn::TrainLogistic(x, y, kConditionClasses, fit, {options.density_feature});
    out.density_pdp = learn::PartialDependence(model, x, 0, 20, 1);
  }
  return out;
}

}  // namespace plateaudit::audit
