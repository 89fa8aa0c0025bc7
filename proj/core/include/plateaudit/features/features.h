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

#ifndef PLATEAUDIT_FEATURES_FEATURES_H_
#define PLATEAUDIT_FEATURES_FEATURES_H_

#include <span>
#include <string>
#include <vector>

#include "plateaudit/core/image.h"
#include "plateaudit/imaging/segment.h"

namespace plateaudit::features {

inline constexpr int kFeatureChannels = 5;
inline constexpr int kPerChannelFeatures = 12;
inline constexpr int kFeatureCount = kFeatureChannels * kPerChannelFeatures + 3;
inline constexpr int kFeatureSchemaVersion = 1;
inline constexpr double kSaturationLevel = 0.99;
inline constexpr double kEdgeThreshold = 0.05;

// Column indices of the global features.
inline constexpr int kCellCountFeature = 60;
inline constexpr int kMeanAreaFeature = 61;
inline constexpr int kStdAreaFeature = 62;

// Table column names: "f000" .. "f062".
const std::vector<std::string>& FeatureNames();
// Human-readable names, e.g. "ch2_fg_mean" or "cell_count".
const std::vector<std::string>& FeatureDescriptions();

// 63 statistics of a five-channel image and its nucleus detections. Per
// channel (Otsu foreground mask): foreground area fraction, foreground mean,
// foreground std, background mean, background std, foreground minus
// background mean, total intensity, 75th percentile, fraction >= 0.99, mean
// squared Laplacian, fraction of pixels with gradient magnitude > 0.05, mean
// 3x3 local variance. Then cell count, mean and std (population) of detection
// areas. Throws Error(kSchema) unless the image has five channels.
std::vector<double> ExtractFeatures(const SiteImage& image,
                                    std::span<const imaging::NucleusDetection> detections);

inline int CellDensity(std::span<const imaging::NucleusDetection> detections) {
  return static_cast<int>(detections.size());
}

}  // namespace plateaudit::features

#endif  // PLATEAUDIT_FEATURES_FEATURES_H_
