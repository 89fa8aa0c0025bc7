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

#ifndef PLATEAUDIT_IMAGING_FOCUS_H_
#define PLATEAUDIT_IMAGING_FOCUS_H_

#include <span>
#include <string>
#include <vector>

#include "plateaudit/core/image.h"
#include "plateaudit/core/rng.h"
#include "plateaudit/imaging/heatmap.h"
#include "plateaudit/learn/logistic.h"

namespace plateaudit::imaging {

// Scale-free frequency descriptors averaged over non-constant channels:
// log Laplacian energy, log gradient energy and three log difference-of-
// Gaussian band energies, each relative to the channel variance.
inline constexpr int kFocusFeatureCount = 5;
const std::vector<std::string>& FocusFeatureNames();

struct FocusFeatures {
  std::vector<double> values;
  // Every channel has zero variance; values are zeros.
  bool degenerate = false;
};

FocusFeatures ComputeFocusFeatures(const SiteImage& image);

// Ordinal blur-level classifier. Class k is the k-th sharpest level.
struct FocusModel {
  std::vector<double> blur_levels;
  learn::LogisticModel classifier;
};

struct FocusTrainingOptions {
  double lambda = 1e-3;
  int max_iter = 3000;
  double tol = 1e-5;
  // Patches beyond this are subsampled with the training stream.
  int max_patches = 400;
};

// Blurs every patch at every level, featurizes and fits the level
// classifier. Requires >= 50 patches and >= 2 strictly increasing, distinct,
// non-negative levels (Error(kConfig) otherwise). Throws Error(kConvergence)
// when the fit does not reach tolerance.
FocusModel TrainFocusModel(std::span<const SiteImage> sharp_patches,
                           std::span<const double> blur_levels, RngStream& rng,
                           const FocusTrainingOptions& options = {});

// sum_k p_k * (1 - k / (L - 1)).
double ExpectedRankScore(std::span<const double> level_probabilities);

struct FocusScore {
  double score = 0.0;
  bool degenerate = false;
};

// In [0, 1], 1 meaning in focus. Zero-variance inputs score 0 and are
// flagged.
FocusScore ScoreFocus(const FocusModel& model, const SiteImage& image);

// Plate-level summary of site scores, averaged per well: mean of the four
// central wells minus mean of the four corner wells, and the Spearman
// correlation of well means with normalized distance from the plate centre.
struct FocusGradientSummary {
  double center_minus_corner = 0.0;
  double spearman = 0.0;
  int wells = 0;
};
// Throws Error(kInput) when a central or corner well has no score.
FocusGradientSummary SummarizeFocusGradient(const SiteValueMap& scores);

std::string FocusModelToJson(const FocusModel& model);
FocusModel FocusModelFromJson(const std::string& text);

}  // namespace plateaudit::imaging

#endif  // PLATEAUDIT_IMAGING_FOCUS_H_
