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

#include "plateaudit/simulate/inject.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "plateaudit/core/rng.h"
#include "plateaudit/imaging/filters.h"

namespace plateaudit::simulate {

double FocusSigma(WellAddress well, const FocusGradientParams& params) {
  if (!params.enabled || params.sigma_max == 0.0) return 0.0;
  const double d = well.NormalizedCenterDistance();
  return params.sigma_max * std::pow(d, params.gamma);
}

SiteImage InjectFocusGradient(const SiteImage& image, WellAddress well,
                              const FocusGradientParams& params) {
  return imaging::GaussianBlur(image, FocusSigma(well, params));
}

AffineShift DrawEntityShift(uint64_t root_seed, std::string_view kind,
                            std::string_view entity_id,
                            const AffineShiftParams& params, int channels) {
  AffineShift shift;
  shift.gain.assign(channels, 1.0);
  shift.offset.assign(channels, 0.0);
  if (!params.enabled) return shift;
  RngStream stream = RngStream::Derive(root_seed, {kind, entity_id, "shift"});
  for (int c = 0; c < channels; ++c) {
    shift.gain[c] = 1.0 + params.gain_std * stream.Normal();
    shift.offset[c] = params.offset_std * stream.Normal();
  }
  return shift;
}

SiteImage ApplyAffineShift(const SiteImage& image, const AffineShift& shift) {
  SiteImage out = image;
  const int channels = image.channels();
  auto data = out.mutable_data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int c = static_cast<int>(i % channels);
    const double v = shift.gain[c] * data[i] + shift.offset[c];
    data[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
  }
  return out;
}

SiteImage InjectBatchShift(const SiteImage& image, uint64_t root_seed,
                           std::string_view batch_id,
                           const AffineShiftParams& params) {
  return ApplyAffineShift(
      image, DrawEntityShift(root_seed, "batch", batch_id, params,
                             image.channels()));
}

SiteImage InjectPlateShift(const SiteImage& image, uint64_t root_seed,
                           std::string_view plate_id,
                           const AffineShiftParams& params) {
  return ApplyAffineShift(
      image, DrawEntityShift(root_seed, "plate", plate_id, params,
                             image.channels()));
}

}  // namespace plateaudit::simulate
