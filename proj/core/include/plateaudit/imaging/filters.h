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

#ifndef PLATEAUDIT_IMAGING_FILTERS_H_
#define PLATEAUDIT_IMAGING_FILTERS_H_

#include <span>
#include <vector>

#include "plateaudit/core/image.h"

namespace plateaudit::imaging {

// Normalized Gaussian taps with radius ceil(3 * sigma). sigma <= 0 yields the
// identity kernel {1}.
std::vector<double> GaussianKernel(double sigma);

// Separable Gaussian blur of one height*width plane, edge-clamped.
std::vector<float> BlurPlane(std::span<const float> plane, int height,
                             int width, double sigma);

// Per-channel Gaussian blur; sigma <= 0 returns an exact copy.
SiteImage GaussianBlur(const SiteImage& image, double sigma);

struct OtsuResult {
  // Foreground is `value > threshold`.
  double threshold = 0.0;
  // True when the input has zero range; the threshold then equals the
  // constant value and nothing is foreground.
  bool degenerate = false;
};

// Otsu's method on a 256-bin histogram spanning [min, max] of the values.
// The threshold is the upper edge of the selected bin, so it scales exactly
// with the data for power-of-two gains.
OtsuResult OtsuThreshold(std::span<const float> values);

// 4-neighbour Laplacian with edge clamping.
std::vector<double> Laplacian(std::span<const float> plane, int height,
                              int width);

// Squared gradient magnitude from central differences, edge-clamped.
std::vector<double> GradientSquared(std::span<const float> plane, int height,
                                    int width);

// Variance inside each 3x3 window (edge-clamped), one value per pixel.
std::vector<double> LocalVariance3x3(std::span<const float> plane, int height,
                                     int width);

}  // namespace plateaudit::imaging

#endif  // PLATEAUDIT_IMAGING_FILTERS_H_
