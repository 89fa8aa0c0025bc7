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

#ifndef PLATEAUDIT_SIMULATE_INJECT_H_
#define PLATEAUDIT_SIMULATE_INJECT_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "plateaudit/core/image.h"
#include "plateaudit/core/types.h"
#include "plateaudit/simulate/config.h"

namespace plateaudit::simulate {

// sigma_max * d^gamma with d the normalized distance of the well from the
// plate centre (corners at d = 1). Zero when the gradient is disabled.
double FocusSigma(WellAddress well, const FocusGradientParams& params);

SiteImage InjectFocusGradient(const SiteImage& image, WellAddress well,
                              const FocusGradientParams& params);

struct AffineShift {
  std::vector<double> gain;
  std::vector<double> offset;
};

// Draws the shift of one entity from stream (root_seed, kind, entity_id,
// "shift"), so every site of the entity sees the same values.
AffineShift DrawEntityShift(uint64_t root_seed, std::string_view kind,
                            std::string_view entity_id,
                            const AffineShiftParams& params, int channels);

// x -> clamp(gain_c * x + offset_c, 0, 1).
SiteImage ApplyAffineShift(const SiteImage& image, const AffineShift& shift);

SiteImage InjectBatchShift(const SiteImage& image, uint64_t root_seed,
                           std::string_view batch_id,
                           const AffineShiftParams& params);
SiteImage InjectPlateShift(const SiteImage& image, uint64_t root_seed,
                           std::string_view plate_id,
                           const AffineShiftParams& params);

}  // namespace plateaudit::simulate

#endif  // PLATEAUDIT_SIMULATE_INJECT_H_
