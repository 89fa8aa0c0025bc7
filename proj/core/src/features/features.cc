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

#include "plateaudit/features/features.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "plateaudit/core/error.h"
#include "plateaudit/imaging/filters.h"

namespace plateaudit::features {
namespace {

constexpr const char* kChannelStats[kPerChannelFeatures] = {
    "fg_area_fraction", "fg_mean",        "fg_std",        "bg_mean",
    "bg_std",           "contrast",       "total_intensity", "p75",
    "saturated_fraction", "laplacian_energy", "edge_density", "local_variance"};

// Linear-interpolated quantile.
double Quantile(std::vector<float> values, double q) {
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  std::nth_element(values.begin(), values.begin() + lo, values.end());
  const double a = values[lo];
  if (lo + 1 >= values.size()) return a;
  const double b = *std::min_element(values.begin() + lo + 1, values.end());
  return a + (pos - lo) * (b - a);
}

struct Moments {
  std::size_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void Add(double v) {
    ++n;
    sum += v;
    sum_sq += v * v;
  }
  double Mean() const { return n ? sum / n : 0.0; }
  double Std() const {
    if (n == 0) return 0.0;
    const double m = Mean();
    return std::sqrt(std::max(0.0, sum_sq / n - m * m));
  }
};

}  // namespace

const std::vector<std::string>& FeatureNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    char buf[8];
    for (int i = 0; i < kFeatureCount; ++i) {
      std::snprintf(buf, sizeof(buf), "f%03d", i);
      out.emplace_back(buf);
    }
    return out;
  }();
  return names;
}

const std::vector<std::string>& FeatureDescriptions() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (int c = 0; c < kFeatureChannels; ++c) {
      for (const char* stat : kChannelStats) {
        out.push_back("ch" + std::to_string(c) + "_" + stat);
      }
    }
    out.push_back("cell_count");
    out.push_back("mean_detection_area");
    out.push_back("std_detection_area");
    return out;
  }();
  return names;
}

std::vector<double> ExtractFeatures(const SiteImage& image,
                                    std::span<const imaging::NucleusDetection> detections) {
  if (image.channels() != kFeatureChannels) {
    throw Error(ErrorCode::kSchema,
                "feature schema needs " + std::to_string(kFeatureChannels) +
                    " channels, image has " + std::to_string(image.channels()));
  }
  const int h = image.height();
  const int w = image.width();
  const double n = static_cast<double>(h) * w;
  std::vector<double> out;
  out.reserve(kFeatureCount);
  for (int c = 0; c < kFeatureChannels; ++c) {
    const std::vector<float> plane = image.Channel(c);
    const imaging::OtsuResult otsu = imaging::OtsuThreshold(plane);
    Moments fg, bg;
    double total = 0.0;
    std::size_t saturated = 0;
    for (const float v : plane) {
      if (!otsu.degenerate && v > otsu.threshold) {
        fg.Add(v);
      } else {
        bg.Add(v);
      }
      total += v;
      if (v >= kSaturationLevel) ++saturated;
    }
    const std::vector<double> lap = imaging::Laplacian(plane, h, w);
    double lap_energy = 0.0;
    for (const double v : lap) lap_energy += v * v;
    const std::vector<double> grad = imaging::GradientSquared(plane, h, w);
    std::size_t edges = 0;
    for (const double g : grad) {
      if (g > kEdgeThreshold * kEdgeThreshold) ++edges;
    }
    const std::vector<double> local = imaging::LocalVariance3x3(plane, h, w);
    double local_mean = 0.0;
    for (const double v : local) local_mean += v;

    out.push_back(static_cast<double>(fg.n) / n);
    out.push_back(fg.Mean());
    out.push_back(fg.Std());
    out.push_back(bg.Mean());
    out.push_back(bg.Std());
    out.push_back(fg.n ? fg.Mean() - bg.Mean() : 0.0);
    out.push_back(total);
    out.push_back(Quantile(plane, 0.75));
    out.push_back(static_cast<double>(saturated) / n);
    out.push_back(lap_energy / n);
    out.push_back(static_cast<double>(edges) / n);
    out.push_back(local_mean / n);
  }
  // Integer areas make these sums order-independent.
  Moments areas;
  for (const auto& d : detections) areas.Add(d.area_px);
  out.push_back(static_cast<double>(CellDensity(detections)));
  out.push_back(areas.Mean());
  out.push_back(areas.Std());
  return out;
}

}  // namespace plateaudit::features
