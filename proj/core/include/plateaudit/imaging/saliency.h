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

#ifndef PLATEAUDIT_IMAGING_SALIENCY_H_
#define PLATEAUDIT_IMAGING_SALIENCY_H_

#include <functional>
#include <span>
#include <vector>

#include "plateaudit/core/image.h"

namespace plateaudit::imaging {

using SiteScoreFn = std::function<double(const SiteImage&)>;

struct SaliencyGrid {
  int rows = 0;
  int cols = 0;
  int window = 0;
  int stride = 0;
  // Row-major; value(i, j) = score(original) - score(occluded at (i, j)).
  std::vector<double> values;

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * cols + j]; }
};

// Per-channel median of the Otsu background pixels of each channel (all
// pixels for a constant channel).
std::vector<float> BackgroundMedian(const SiteImage& image);

// Slides a window x window occluder with the given stride, replacing the
// covered pixels by `fill` (one value per channel). Grid dims are
// floor((side - window) / stride) + 1 per axis.
SaliencyGrid OcclusionSaliency(const SiteScoreFn& score, const SiteImage& image,
                               int window, int stride,
                               std::span<const float> fill);

}  // namespace plateaudit::imaging

#endif  // PLATEAUDIT_IMAGING_SALIENCY_H_
