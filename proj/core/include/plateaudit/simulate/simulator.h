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

#ifndef PLATEAUDIT_SIMULATE_SIMULATOR_H_
#define PLATEAUDIT_SIMULATE_SIMULATOR_H_

#include <filesystem>
#include <string>
#include <vector>

#include "plateaudit/core/image.h"
#include "plateaudit/core/types.h"
#include "plateaudit/simulate/config.h"

namespace plateaudit::simulate {

struct CellTruth {
  double x = 0.0;
  double y = 0.0;
  double amplitude = 1.0;
};

struct SiteTruth {
  SiteKey key;
  double expected_count = 0.0;
  int cell_count = 0;
  std::vector<CellTruth> cells;
  double blur_sigma = 0.0;
  std::vector<double> batch_gain, batch_offset;
  std::vector<double> plate_gain, plate_offset;
  std::vector<double> lab_offset;
  bool phenotype = false;
  // Names of the confounders that touched this site.
  std::vector<std::string> active;
};

// One record per manifest site, in manifest order.
struct GroundTruth {
  std::vector<SiteTruth> sites;
};

struct ExperimentPlan {
  SimConfig config;
  ExperimentManifest manifest;
  GroundTruth truth;
};

// Lays out plates and draws every per-site quantity except pixel noise.
// Image paths are relative: images/<batch>/<plate>/r<row>c<col>s<site>.ptns.
ExperimentPlan PlanExperiment(const SimConfig& config);

// Renders one site: background + noise, Gaussian cell spots (with phenotype
// texture on disease lines), lab-source offset, plate shift, batch shift,
// then focus blur. Pure in (config, truth).
SiteImage RenderSite(const SimConfig& config, const SiteTruth& truth);

// Renders the site at `index` of the plan.
SiteImage RenderSite(const ExperimentPlan& plan, std::size_t index);

// Writes manifest.jsonl, groundtruth.json, pairs.json (when pairs are
// configured), config.json and every image under `out_dir`.
ExperimentPlan GenerateExperiment(const SimConfig& config,
                                  const std::filesystem::path& out_dir,
                                  int threads = 1);

std::string GroundTruthToJson(const GroundTruth& truth);
GroundTruth GroundTruthFromJson(const std::string& text);

}  // namespace plateaudit::simulate

#endif  // PLATEAUDIT_SIMULATE_SIMULATOR_H_
