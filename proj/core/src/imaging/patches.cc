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

#include "plateaudit/imaging/patches.h"

#include <algorithm>
#include <cmath>

#include "plateaudit/core/error.h"

namespace plateaudit::imaging {

std::vector<CellPatch> CropPatches(const SiteImage& image, const SiteKey& parent,
                                   std::span<const NucleusDetection> detections,
                                   int size) {
  if (size % 2 != 0 || size < kMinImageSide ||
      size > std::min(image.height(), image.width())) {
    throw Error(ErrorCode::kInput,
                "patch size " + std::to_string(size) +
                    " must be even, >= 16 and fit inside the image");
  }
  const int half = size / 2;
  std::vector<CellPatch> patches;
  patches.reserve(detections.size());
  for (const auto& d : detections) {
    CellPatch patch;
    patch.parent = parent;
    patch.center_x = d.x;
    patch.center_y = d.y;
    patch.data = SiteImage(size, size, image.channels());
    const int top = static_cast<int>(std::floor(d.y + 0.5)) - half;
    const int left = static_cast<int>(std::floor(d.x + 0.5)) - half;
    patch.padded = top < 0 || left < 0 || top + size > image.height() ||
                   left + size > image.width();
    for (int y = 0; y < size; ++y) {
      const int sy = std::clamp(top + y, 0, image.height() - 1);
      for (int x = 0; x < size; ++x) {
        const int sx = std::clamp(left + x, 0, image.width() - 1);
        for (int c = 0; c < image.channels(); ++c) {
          patch.data.at(y, x, c) = image.at(sy, sx, c);
        }
      }
    }
    patches.push_back(std::move(patch));
  }
  return patches;
}

}  // namespace plateaudit::imaging
