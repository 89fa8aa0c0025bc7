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

#ifndef PLATEAUDIT_IMAGING_HEATMAP_H_
#define PLATEAUDIT_IMAGING_HEATMAP_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "plateaudit/core/types.h"

namespace plateaudit::imaging {

using SiteValueMap = std::map<std::pair<WellAddress, int>, double>;

// Viridis-like ramp through five stops at t = 0, .25, .5, .75, 1:
// #440154, #3b528b, #21918c, #5ec962, #fde725 (linear RGB interpolation).
// t is clamped to [0, 1]. Low values are dark purple, high values yellow.
std::array<uint8_t, 3> RampColor(double t);
std::string RampHex(double t);

// 8x12 grid of wells, each split into sites_per_well sub-cells (sqrt(s) x
// sqrt(s) when s is a perfect square, otherwise a 1 x s strip). Colours
// are scaled between the min and max value; missing sites are grey.
// Throws Error(kInput) for a non-finite value (naming its key) or a
// site index outside the layout.
std::string PlateHeatmapSvg(const SiteValueMap& values, int sites_per_well,
                            const std::string& title);

}  // namespace plateaudit::imaging

#endif  // PLATEAUDIT_IMAGING_HEATMAP_H_
