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

#ifndef PLATEAUDIT_LEARN_METRICS_H_
#define PLATEAUDIT_LEARN_METRICS_H_

#include <span>
#include <vector>

namespace plateaudit::learn {

// Exact Mann-Whitney AUC: (wins + ties / 2) / (P * N). Labels are 0/1.
// Throws Error(kUndefinedMetric) unless both classes are present.
double RocAuc(std::span<const double> scores, std::span<const int> labels);

// Fraction of equal entries. Throws Error(kInput) on length mismatch or
// empty input.
double Accuracy(std::span<const int> predictions, std::span<const int> labels);

// Average ranks (1-based), ties receive their mean rank.
std::vector<double> AverageRanks(std::span<const double> values);

// Pearson correlation of average ranks.
double SpearmanCorrelation(std::span<const double> x, std::span<const double> y);

double Median(std::vector<double> values);
double Mean(std::span<const double> values);
// Sample standard deviation (n - 1); 0 for fewer than two values.
double SampleSd(std::span<const double> values);

}  // namespace plateaudit::learn

#endif  // PLATEAUDIT_LEARN_METRICS_H_
