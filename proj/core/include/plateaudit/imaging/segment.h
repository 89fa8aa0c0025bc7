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

#ifndef PLATEAUDIT_IMAGING_SEGMENT_H_
#define PLATEAUDIT_IMAGING_SEGMENT_H_

#include <span>
#include <string>
#include <vector>

#include "plateaudit/core/image.h"

namespace plateaudit::imaging {

struct NucleusDetection {
  // Intensity-weighted centroid in pixel coordinates (pixel centres at
  // integers).
  double x = 0.0;
  double y = 0.0;
  int area_px = 0;
  double mean_intensity = 0.0;

  bool operator==(const NucleusDetection&) const = default;
};

struct SegmentationOptions {
  // Nuclear stain channel.
  int channel = 0;
  int min_area = 5;
};

struct SegmentationResult {
  // Sorted by (y, x).
  std::vector<NucleusDetection> detections;
  // Zero-variance nucleus channel; detections is then empty.
  bool degenerate = false;
  double threshold = 0.0;
};

// Otsu threshold on the nucleus channel, 8-connected component labelling,
// components smaller than min_area discarded.
SegmentationResult SegmentNuclei(const SiteImage& image,
                                 const SegmentationOptions& options = {});

// "site_id,x,y,area,mean_intensity" rows (no header).
std::string DetectionsToCsvRows(const std::string& site_id,
                                std::span<const NucleusDetection> detections);
inline constexpr const char* kDetectionsCsvHeader =
    "site_id,x,y,area,mean_intensity\n";

}  // namespace plateaudit::imaging

#endif  // PLATEAUDIT_IMAGING_SEGMENT_H_
