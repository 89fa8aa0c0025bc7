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

#ifndef PLATEAUDIT_AUDIT_NUISANCE_H_
#define PLATEAUDIT_AUDIT_NUISANCE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "plateaudit/core/rng.h"
#include "plateaudit/features/table.h"

namespace plateaudit::audit {

struct NuisanceOptions {
  // Metadata columns (see features::MetaValue).
  std::vector<std::string> factors = {"batch", "plate", "row", "column"};
  int repeats = 10;
  double lambda = 1e-2;
  uint64_t seed = 0;
  // Verdict: biased iff accuracy > baseline mean + 3 sd and accuracy > chance + margin.
  double margin = 0.05;
  double test_fraction = 0.2;
  int min_class_count = 10;
  int threads = 1;
};

struct FactorResult {
  std::string factor;
  bool skipped = false;
  std::string note;
  std::vector<std::string> classes;
  int train_rows = 0;
  int test_rows = 0;
  double accuracy = 0.0;
  bool converged = true;
  std::vector<double> baseline;
  double baseline_mean = 0.0;
  double baseline_sd = 0.0;
  double chance = 0.0;
  bool biased = false;
};

struct NuisanceAuditResult {
  bool controls_only = false;
  int rows = 0;
  int repeats = 0;
  double margin = 0.0;
  uint64_t seed = 0;
  std::vector<FactorResult> factors;

  bool AnyBiased() const;
};

// Stratified split: round(test_fraction * count) rows of every class (at
// least one, at most count - 1) go to the test set. Returned index lists
// are sorted.
struct Split {
  std::vector<int> train;
  std::vector<int> test;
};
Split StratifiedSplit(std::span<const int> labels, double test_fraction, RngStream& rng);

// Rows are restricted to control wells when any row is a control. Throws
// Error(kAudit) when a factor has a class with fewer than min_class_count rows
// and Error(kConfig) for repeats < 3.
NuisanceAuditResult NuisanceAudit(const features::FeatureTable& table,
                                  const NuisanceOptions& options);

}  // namespace plateaudit::audit

#endif  // PLATEAUDIT_AUDIT_NUISANCE_H_
