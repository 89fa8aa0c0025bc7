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

#include "plateaudit/imaging/segment.h"

#include <algorithm>

#include "plateaudit/core/error.h"
#include "plateaudit/core/io.h"
#include "plateaudit/imaging/filters.h"

namespace plateaudit::imaging {

SegmentationResult SegmentNuclei(const SiteImage& image,
                                 const SegmentationOptions& options) {
  if (options.channel < 0 || options.channel >= image.channels()) {
    throw Error(ErrorCode::kInput,
                "nucleus channel " + std::to_string(options.channel) +
                    " out of range for " + std::to_string(image.channels()) +
                    " channels");
  }
  const int h = image.height();
  const int w = image.width();
  const std::vector<float> plane = image.Channel(options.channel);
  SegmentationResult result;
  const OtsuResult otsu = OtsuThreshold(plane);
  result.threshold = otsu.threshold;
  if (otsu.degenerate) {
    result.degenerate = true;
    return result;
  }

  std::vector<int> label(plane.size(), -1);
  std::vector<int> stack;
  int next_label = 0;
  for (std::size_t start = 0; start < plane.size(); ++start) {
    if (label[start] >= 0 || !(plane[start] > otsu.threshold)) continue;
    label[start] = next_label;
    stack.assign(1, static_cast<int>(start));
    int area = 0;
    double mass = 0.0, mx = 0.0, my = 0.0;
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      const int py = p / w;
      const int px = p % w;
      const double v = plane[p];
      ++area;
      mass += v;
      mx += v * px;
      my += v * py;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int ny = py + dy;
          const int nx = px + dx;
          if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
          const int q = ny * w + nx;
          if (label[q] < 0 && plane[q] > otsu.threshold) {
            label[q] = next_label;
            stack.push_back(q);
          }
        }
      }
    }
    ++next_label;
    if (area < options.min_area) continue;
    result.detections.push_back({mx / mass, my / mass, area, mass / area});
  }
  std::sort(result.detections.begin(), result.detections.end(),
            [](const NucleusDetection& a, const NucleusDetection& b) {
              return a.y != b.y ? a.y < b.y : a.x < b.x;
            });
  return result;
}

std::string DetectionsToCsvRows(const std::string& site_id,
                                std::span<const NucleusDetection> detections) {
  std::string out;
  for (const auto& d : detections) {
    out += site_id + "," + FormatSignificant(d.x, 9) + "," +
           FormatSignificant(d.y, 9) + "," + std::to_string(d.area_px) + "," +
           FormatSignificant(d.mean_intensity, 9) + "\n";
  }
  return out;
}

}  // namespace plateaudit::imaging
