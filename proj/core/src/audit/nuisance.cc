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

#include "plateaudit/audit/nuisance.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "plateaudit/core/error.h"
#include "plateaudit/core/parallel.h"
#include "plateaudit/learn/labels.h"
#include "plateaudit/learn/logistic.h"
#include "plateaudit/learn/metrics.h"
#include "plateaudit/learn/permute.h"

namespace plateaudit::audit {
namespace {

struct Job {
  std::size_t factor = 0;
  // 0 = real features, r >= 1 = permuted repeat r - 1.
  int repeat = 0;
};

struct JobOutcome {
  double accuracy = 0.0;
  bool converged = true;
  int train_rows = 0;
  int test_rows = 0;
};

Eigen::MatrixXd Rows(const Eigen::MatrixXd& x, const std::vector<int>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(i) = x.row(idx[i]);
  return out;
}

}  // namespace

bool NuisanceAuditResult::AnyBiased() const {
  return std::any_of(factors.begin(), factors.end(),
                     [](const FactorResult& f) { return f.biased; });
}

Split StratifiedSplit(std::span<const int> labels, double test_fraction, RngStream& rng) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kConfig, "test fraction must be in (0, 1)");
  }
  std::map<int, std::vector<int>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class[labels[i]].push_back(static_cast<int>(i));
  }
  Split split;
  for (auto& [label, members] : by_class) {
    const int count = static_cast<int>(members.size());
    if (count < 2) {
      throw Error(ErrorCode::kAudit, "class with a single row cannot be split");
    }
    const int n_test = std::clamp(static_cast<int>(std::lround(test_fraction * count)), 1,
                                  count - 1);
    rng.Shuffle(members);
    split.test.insert(split.test.end(), members.begin(), members.begin() + n_test);
    split.train.insert(split.train.end(), members.begin() + n_test, members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

NuisanceAuditResult NuisanceAudit(const features::FeatureTable& table,
                                  const NuisanceOptions& options) {
  if (options.repeats < 3) throw Error(ErrorCode::kConfig, "repeats must be >= 3");
  if (!(options.lambda >= 0.0)) throw Error(ErrorCode::kConfig, "lambda must be >= 0");
  NuisanceAuditResult result;
  result.repeats = options.repeats;
  result.margin = options.margin;
  result.seed = options.seed;
  result.controls_only = std::any_of(table.rows.begin(), table.rows.end(),
                                     [](const auto& r) { return r.meta.is_control; });
  const features::FeatureTable rows =
      result.controls_only
          ? table.Filter([](const features::FeatureRow& r) { return r.meta.is_control; })
          : table;
  result.rows = rows.size();
  const Eigen::MatrixXd x = rows.Matrix();

  std::vector<learn::EncodedLabels> labels(options.factors.size());
  for (std::size_t f = 0; f < options.factors.size(); ++f) {
    FactorResult fr;
    fr.factor = options.factors[f];
    std::vector<std::string> values;
    values.reserve(rows.rows.size());
    for (const auto& r : rows.rows) values.push_back(features::MetaValue(r.meta, fr.factor));
    labels[f] = learn::EncodeLabels(values);
    fr.classes = labels[f].classes;
    const int k = static_cast<int>(fr.classes.size());
    if (k < 2) {
      fr.skipped = true;
      fr.note = "factor is constant over the audited rows";
    } else {
      std::vector<int> counts(k, 0);
      for (const int y : labels[f].y) ++counts[y];
      for (int c = 0; c < k; ++c) {
        if (counts[c] < options.min_class_count) {
          throw Error(ErrorCode::kAudit,
                      "factor '" + fr.factor + "' class '" + fr.classes[c] + "' has " +
                          std::to_string(counts[c]) + " rows; need at least " +
                          std::to_string(options.min_class_count));
        }
      }
      fr.chance = 1.0 / k;
    }
    result.factors.push_back(std::move(fr));
  }

  std::vector<Job> jobs;
  for (std::size_t f = 0; f < result.factors.size(); ++f) {
    if (result.factors[f].skipped) continue;
    for (int r = 0; r <= options.repeats; ++r) jobs.push_back({f, r});
  }
  learn::LogisticOptions fit;
  fit.lambda = options.lambda;
  std::vector<JobOutcome> outcomes(jobs.size());
  ParallelFor(jobs.size(), options.threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    const std::string& factor = options.factors[job.factor];
    const learn::EncodedLabels& enc = labels[job.factor];
    const std::string tag = job.repeat == 0 ? "real" : std::to_string(job.repeat - 1);
    RngStream split_rng = RngStream::Derive(options.seed, {"nuisance", factor, "split", tag});
    const Split split = StratifiedSplit(enc.y, options.test_fraction, split_rng);
    Eigen::MatrixXd features = x;
    if (job.repeat > 0) {
      const uint64_t permute_seed =
          RngStream::Derive(options.seed, {"nuisance", factor, "permute", tag}).NextU64();
      features = learn::PermuteColumns(x, permute_seed);
    }
    std::vector<int> y_train, y_test;
    for (const int i : split.train) y_train.push_back(enc.y[i]);
    for (const int i : split.test) y_test.push_back(enc.y[i]);
    const learn::LogisticModel model =
        learn::TrainLogistic(Rows(features, split.train), y_train, enc.classes, fit);
    const std::vector<int> predicted =
        learn::ArgmaxRows(learn::PredictProba(model, Rows(features, split.test)));
    outcomes[j] = {learn::Accuracy(predicted, y_test), model.convergence.converged,
                   static_cast<int>(split.train.size()), static_cast<int>(split.test.size())};
  });

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    FactorResult& fr = result.factors[jobs[j].factor];
    const JobOutcome& o = outcomes[j];
    if (jobs[j].repeat == 0) {
      fr.accuracy = o.accuracy;
      fr.converged = o.converged;
      fr.train_rows = o.train_rows;
      fr.test_rows = o.test_rows;
    } else {
      fr.baseline.push_back(o.accuracy);
    }
  }
  for (FactorResult& fr : result.factors) {
    if (fr.skipped) continue;
    fr.baseline_mean = learn::Mean(fr.baseline);
    fr.baseline_sd = learn::SampleSd(fr.baseline);
    fr.biased = fr.accuracy > fr.baseline_mean + 3.0 * fr.baseline_sd &&
                fr.accuracy > fr.chance + options.margin;
    if (!fr.converged) fr.note = "real-feature model hit the iteration cap";
  }
  return result;
}

}  // namespace plateaudit::audit
