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

#ifndef PLATEAUDIT_SIMULATE_CONFIG_H_
#define PLATEAUDIT_SIMULATE_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "plateaudit/core/types.h"

namespace plateaudit::simulate {

struct FocusGradientParams {
  bool enabled = false;
  // Blur sigma in pixels at the plate corners.
  double sigma_max = 3.0;
  double gamma = 1.0;
};

// Per-channel affine perturbation x -> g*x + b with g ~ 1 + N(0, gain_std)
// and b ~ N(0, offset_std), drawn once per entity and channel.
struct AffineShiftParams {
  bool enabled = false;
  double gain_std = 0.0;
  double offset_std = 0.0;
};

struct DensityConfoundParams {
  bool enabled = false;
  // Multiplies the expected cell count of disease lines.
  double delta = 1.5;
};

struct LabSourceSignalParams {
  bool enabled = false;
  // Added to lab-B lines, one value per channel.
  std::vector<double> offset = {0.0, 0.0, 0.0, 0.0, 0.0};
};

struct PhenotypeParams {
  bool enabled = false;
  // Relative strength of multiplicative per-pixel texture on the non-nuclear
  // channels of disease-line cells.
  double effect_size = 0.5;
};

struct CellModel {
  double count_mean_healthy = 16.0;
  double count_mean_disease = 16.0;
  // Gamma shape of the per-site Poisson rate; larger means less
  // overdispersion.
  double count_shape = 30.0;
  double nucleus_radius = 3.0;
  std::vector<double> channel_amplitude = {0.8, 0.5, 0.4, 0.45, 0.35};
  // Spot width of each channel relative to the nucleus spot.
  std::vector<double> channel_spread = {1.0, 1.8, 2.2, 1.5, 2.6};
  double amplitude_cv = 0.15;
  std::vector<double> background = {0.05, 0.04, 0.04, 0.05, 0.03};
  double noise_std = 0.02;
  // Minimum centre distance between cells (0 disables).
  double min_separation = 0.0;
};

struct LinePlacement {
  CellLine line;
  // Wells used on every plate. Either every line lists wells or none does,
  // in which case the automatic layout is used.
  std::vector<WellAddress> wells;
};

struct LinePairIds {
  std::string healthy;
  std::string disease;
};

struct ControlParams {
  bool enabled = true;
  std::string line_id = "CTRL";
  // "checkerboard" ((row + col) even), or "explicit" to use `wells`.
  std::string layout = "checkerboard";
  std::vector<WellAddress> wells;
};

struct SimConfig {
  uint64_t root_seed = 1;
  int batches = 2;
  int plates_per_batch = 3;
  int sites_per_well = 4;
  int height = 64;
  int width = 64;
  int channels = 5;
  CellModel cells;
  std::vector<LinePlacement> cell_lines;
  std::vector<LinePairIds> pairs;
  ControlParams control;
  FocusGradientParams focus_gradient;
  AffineShiftParams batch_shift;
  AffineShiftParams plate_shift;
  DensityConfoundParams density_confound;
  LabSourceSignalParams lab_source_signal;
  PhenotypeParams phenotype_signal;

  // Throws Error(kConfig) on any violated invariant.
  void Validate() const;
};

// Six healthy (H1..H6) and six disease (D1..D6) lines paired by index. Pairs
// 1-5 are cross-source (healthy from lab A, disease from lab B); pair 6 is
// same-source (both lab A).
SimConfig DefaultSimConfig();

// JSON with every field present; keys not in the schema are rejected at every
// nesting level and omitted keys keep their defaults.
SimConfig SimConfigFromJson(const std::string& text);
std::string SimConfigToJson(const SimConfig& config);

// Digest of the canonical JSON.
std::string ConfigDigest(const SimConfig& config);

}  // namespace plateaudit::simulate

#endif  // PLATEAUDIT_SIMULATE_CONFIG_H_
