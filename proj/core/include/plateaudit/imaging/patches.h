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

#ifndef PLATEAUDIT_IMAGING_PATCHES_H_
#define PLATEAUDIT_IMAGING_PATCHES_H_

#include <span>
#include <vector>

#include "plateaudit/core/image.h"
#include "plateaudit/core/types.h"
#include "plateaudit/imaging/segment.h"

namespace plateaudit::imaging {

inline constexpr int kDefaultPatchSize = 48;

struct CellPatch {
  SiteKey parent;
  double center_x = 0.0;
  double center_y = 0.0;
  SiteImage data;
  // True when part of the crop fell outside the site and was edge-padded.
  bool padded = false;
};

// One size x size crop per detection, centred on the rounded centroid.
// size must be even, >= 16 and <= min(height, width).
std::vector<CellPatch> CropPatches(const SiteImage& image, const SiteKey& parent,
                                   std::span<const NucleusDetection> detections,
                                   int size = kDefaultPatchSize);

}  // namespace plateaudit::imaging

#endif  // PLATEAUDIT_IMAGING_PATCHES_H_
