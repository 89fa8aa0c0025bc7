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

#include "plateaudit/imaging/saliency.h"

#include <algorithm>

#include "plateaudit/core/error.h"
#include "plateaudit/imaging/filters.h"

namespace plateaudit::imaging {

std::vector<float> BackgroundMedian(const SiteImage& image) {
  std::vector<float> out(image.channels());
  for (int c = 0; c < image.channels(); ++c) {
    const std::vector<float> plane = image.Channel(c);
    const OtsuResult otsu = OtsuThreshold(plane);
    std::vector<float> bg;
    if (otsu.degenerate) {
      bg = plane;
    } else {
      for (const float v : plane) {
        if (!(v > otsu.threshold)) bg.push_back(v);
      }
    }
    const std::size_t mid = bg.size() / 2;
    std::nth_element(bg.begin(), bg.begin() + mid, bg.end());
    float median = bg[mid];
    if (bg.size() % 2 == 0) {
      const float lower = *std::max_element(bg.begin(), bg.begin() + mid);
      median = 0.5f * (median + lower);
    }
    out[c] = median;
  }
  return out;
}

SaliencyGrid OcclusionSaliency(const SiteScoreFn& score, const SiteImage& image,
                               int window, int stride,
                               std::span<const float> fill) {
  if (window < 1 || window > std::min(image.height(), image.width())) {
    throw Error(ErrorCode::kInput, "occlusion window must be in [1, min(h, w)]");
  }
  if (stride < 1) throw Error(ErrorCode::kInput, "occlusion stride must be >= 1");
  if (static_cast<int>(fill.size()) != image.channels()) {
    throw Error(ErrorCode::kInput, "fill value count must equal channel count");
  }
  SaliencyGrid grid;
  grid.window = window;
  grid.stride = stride;
  grid.rows = (image.height() - window) / stride + 1;
  grid.cols = (image.width() - window) / stride + 1;
  grid.values.resize(static_cast<std::size_t>(grid.rows) * grid.cols);
  const double base = score(image);
  for (int i = 0; i < grid.rows; ++i) {
    for (int j = 0; j < grid.cols; ++j) {
      SiteImage occluded = image;
      for (int y = i * stride; y < i * stride + window; ++y) {
        for (int x = j * stride; x < j * stride + window; ++x) {
          for (int c = 0; c < image.channels(); ++c) occluded.at(y, x, c) = fill[c];
        }
      }
      grid.values[static_cast<std::size_t>(i) * grid.cols + j] = base - score(occluded);
    }
  }
  return grid;
}

}  // namespace plateaudit::imaging
