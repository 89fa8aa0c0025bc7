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

#include "plateaudit/imaging/filters.h"

#include <algorithm>
#include <array>
#include <cmath>

namespace plateaudit::imaging {
namespace {

inline int ClampIndex(int i, int n) { return std::clamp(i, 0, n - 1); }

}  // namespace

std::vector<double> GaussianKernel(double sigma) {
  if (!(sigma > 0.0)) return {1.0};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
    taps[i + radius] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

std::vector<float> BlurPlane(std::span<const float> plane, int height,
                             int width, double sigma) {
  if (!(sigma > 0.0)) return {plane.begin(), plane.end()};
  const std::vector<double> taps = GaussianKernel(sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  std::vector<double> horizontal(plane.size());
  for (int y = 0; y < height; ++y) {
    const float* row = plane.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += taps[k + radius] * row[ClampIndex(x + k, width)];
      }
      horizontal[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
  std::vector<float> out(plane.size());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += taps[k + radius] *
               horizontal[static_cast<std::size_t>(ClampIndex(y + k, height)) *
                              width +
                          x];
      }
      out[static_cast<std::size_t>(y) * width + x] = static_cast<float>(acc);
    }
  }
  return out;
}

SiteImage GaussianBlur(const SiteImage& image, double sigma) {
  if (!(sigma > 0.0)) return image;
  SiteImage out = image;
  for (int c = 0; c < image.channels(); ++c) {
    out.SetChannel(c, BlurPlane(image.Channel(c), image.height(),
                                image.width(), sigma));
  }
  return out;
}

OtsuResult OtsuThreshold(std::span<const float> values) {
  OtsuResult result;
  if (values.empty()) {
    result.degenerate = true;
    return result;
  }
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *min_it;
  const double hi = *max_it;
  if (!(hi > lo)) {
    result.threshold = lo;
    result.degenerate = true;
    return result;
  }
  constexpr int kBins = 256;
  const double range = hi - lo;
  std::array<double, kBins> histogram{};
  std::array<double, kBins> bin_sum{};
  for (const float v : values) {
    const int bin =
        std::min(kBins - 1, static_cast<int>((v - lo) / range * kBins));
    histogram[bin] += 1.0;
    bin_sum[bin] += v;
  }
  const double total = static_cast<double>(values.size());
  double total_sum = 0.0;
  for (const double s : bin_sum) total_sum += s;

  double weight_below = 0.0;
  double sum_below = 0.0;
  double best = -1.0;
  int best_bin = 0;
  for (int t = 0; t < kBins - 1; ++t) {
    weight_below += histogram[t];
    sum_below += bin_sum[t];
    const double weight_above = total - weight_below;
    if (weight_below == 0.0 || weight_above == 0.0) continue;
    const double mean_below = sum_below / weight_below;
    const double mean_above = (total_sum - sum_below) / weight_above;
    const double diff = mean_below - mean_above;
    const double between = weight_below * weight_above * diff * diff;
    if (between > best) {
      best = between;
      best_bin = t;
    }
  }
  result.threshold = lo + (best_bin + 1) * (range / kBins);
  return result;
}

std::vector<double> Laplacian(std::span<const float> plane, int height,
                              int width) {
  std::vector<double> out(plane.size());
  const auto at = [&](int y, int x) {
    return static_cast<double>(
        plane[static_cast<std::size_t>(ClampIndex(y, height)) * width +
              ClampIndex(x, width)]);
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      out[static_cast<std::size_t>(y) * width + x] =
          at(y - 1, x) + at(y + 1, x) + at(y, x - 1) + at(y, x + 1) -
          4.0 * at(y, x);
    }
  }
  return out;
}

std::vector<double> GradientSquared(std::span<const float> plane, int height,
                                    int width) {
  std::vector<double> out(plane.size());
  const auto at = [&](int y, int x) {
    return static_cast<double>(
        plane[static_cast<std::size_t>(ClampIndex(y, height)) * width +
              ClampIndex(x, width)]);
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double gx = 0.5 * (at(y, x + 1) - at(y, x - 1));
      const double gy = 0.5 * (at(y + 1, x) - at(y - 1, x));
      out[static_cast<std::size_t>(y) * width + x] = gx * gx + gy * gy;
    }
  }
  return out;
}

std::vector<double> LocalVariance3x3(std::span<const float> plane, int height,
                                     int width) {
  std::vector<double> out(plane.size());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double sum = 0.0;
      double sum_sq = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const double v =
              plane[static_cast<std::size_t>(ClampIndex(y + dy, height)) *
                        width +
                    ClampIndex(x + dx, width)];
          sum += v;
          sum_sq += v * v;
        }
      }
      const double mean = sum / 9.0;
      out[static_cast<std::size_t>(y) * width + x] =
          std::max(0.0, sum_sq / 9.0 - mean * mean);
    }
  }
  return out;
}

}  // namespace plateaudit::imaging
