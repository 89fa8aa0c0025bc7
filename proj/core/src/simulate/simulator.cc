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

#include "plateaudit/simulate/simulator.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "plateaudit/core/error.h"
#include "plateaudit/core/image.h"
#include "plateaudit/core/io.h"
#include "plateaudit/core/manifest.h"
#include "plateaudit/core/parallel.h"
#include "plateaudit/core/rng.h"
#include "plateaudit/simulate/inject.h"

namespace plateaudit::simulate {
namespace {

using nlohmann::json;

constexpr int kPlacementAttempts = 1000;

std::vector<WellAddress> ControlWells(const ControlParams& control) {
  if (!control.enabled) return {};
  if (control.layout == "explicit") return control.wells;
  std::vector<WellAddress> wells;
  for (int r = 0; r < kPlateRows; ++r) {
    for (int c = 0; c < kPlateCols; ++c) {
      if ((r + c) % 2 == 0) wells.push_back({r, c});
    }
  }
  return wells;
}

// Well -> index into config.cell_lines (or -1 for control) for plate `g`.
std::map<WellAddress, int> PlateLayout(const SimConfig& config, int g,
                                       const std::set<WellAddress>& controls) {
  std::map<WellAddress, int> layout;
  for (const auto& w : controls) layout[w] = -1;
  const bool explicit_wells = !config.cell_lines.front().wells.empty();
  if (explicit_wells) {
    for (std::size_t i = 0; i < config.cell_lines.size(); ++i) {
      for (const auto& w : config.cell_lines[i].wells) {
        if (!layout.emplace(w, static_cast<int>(i)).second) {
          throw Error(ErrorCode::kConfig,
                      "well " + w.Label() + " is assigned twice");
        }
      }
    }
    return layout;
  }
  // Rotating the assignment per plate spreads every line over positions
  // and plates.
  const int lines = static_cast<int>(config.cell_lines.size());
  int i = 0;
  for (int r = 0; r < kPlateRows; ++r) {
    for (int c = 0; c < kPlateCols; ++c) {
      const WellAddress w{r, c};
      if (controls.contains(w)) continue;
      layout[w] = (i + g) % lines;
      ++i;
    }
  }
  return layout;
}

std::vector<CellTruth> PlaceCells(const SimConfig& config, int count,
                                  RngStream& stream) {
  const CellModel& m = config.cells;
  const double margin = std::min(m.nucleus_radius,
                                 0.25 * std::min(config.width, config.height));
  const double span_x = config.width - 1 - 2 * margin;
  const double span_y = config.height - 1 - 2 * margin;
  std::vector<CellTruth> cells;
  cells.reserve(count);
  for (int k = 0; k < count; ++k) {
    CellTruth cell;
    for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
      cell.x = margin + span_x * stream.Uniform();
      cell.y = margin + span_y * stream.Uniform();
      if (m.min_separation <= 0.0) break;
      const bool clear = std::all_of(cells.begin(), cells.end(), [&](const CellTruth& o) {
        return std::hypot(o.x - cell.x, o.y - cell.y) >= m.min_separation;
      });
      // After too many attempts the last draw is kept; the site is simply
      // more crowded than requested.
      if (clear) break;
    }
    cell.amplitude = std::max(0.05, 1.0 + m.amplitude_cv * stream.Normal());
    cells.push_back(cell);
  }
  return cells;
}

json VectorJson(const std::vector<double>& v) { return json(v); }

std::vector<double> VectorFrom(const json& j) { return j.get<std::vector<double>>(); }

}  // namespace

ExperimentPlan PlanExperiment(const SimConfig& config) {
  config.Validate();
  ExperimentPlan plan;
  plan.config = config;
  const std::vector<WellAddress> control_list = ControlWells(config.control);
  const std::set<WellAddress> controls(control_list.begin(), control_list.end());

  for (const auto& p : config.cell_lines) plan.manifest.cell_lines.push_back(p.line);
  CellLine control_line{config.control.line_id, config.control.line_id,
                        Condition::kHealthy, "control", LabSource::kA};
  if (config.control.enabled) plan.manifest.cell_lines.push_back(control_line);
  plan.manifest.config_digest = ConfigDigest(config);

  const int channels = config.channels;
  int g = 0;
  for (int b = 0; b < config.batches; ++b) {
    const std::string batch = "b" + std::to_string(b);
    const AffineShift batch_shift =
        DrawEntityShift(config.root_seed, "batch", batch, config.batch_shift, channels);
    for (int p = 0; p < config.plates_per_batch; ++p, ++g) {
      const std::string plate = batch + "-p" + std::to_string(p);
      const AffineShift plate_shift =
          DrawEntityShift(config.root_seed, "plate", plate, config.plate_shift, channels);
      for (const auto& [well, line_index] : PlateLayout(config, g, controls)) {
        const CellLine& line = line_index < 0
                                   ? control_line
                                   : config.cell_lines[line_index].line;
        const bool disease = line.condition == Condition::kDisease;
        for (int s = 0; s < config.sites_per_well; ++s) {
          SiteRecord record;
          record.key = SiteKey{batch, plate, well, s};
          record.cell_line = line.id;
          record.is_control = line_index < 0;
          record.image_path = "images/" + batch + "/" + plate + "/r" +
                              std::to_string(well.row) + "c" +
                              std::to_string(well.col) + "s" +
                              std::to_string(s) + ".ptns";

          SiteTruth truth;
          truth.key = record.key;
          double mean = disease ? config.cells.count_mean_disease
                                : config.cells.count_mean_healthy;
          if (disease && config.density_confound.enabled) {
            mean *= config.density_confound.delta;
            truth.active.push_back("density_confound");
          }
          RngStream stream = RngStream::Derive(
              config.root_seed, {"site", record.key.ToString(), "cells"});
          const double rate =
              mean > 0.0 ? stream.Gamma(config.cells.count_shape,
                                        mean / config.cells.count_shape)
                         : 0.0;
          truth.expected_count = mean;
          truth.cell_count = static_cast<int>(stream.Poisson(rate));
          truth.cells = PlaceCells(config, truth.cell_count, stream);

          truth.blur_sigma = FocusSigma(well, config.focus_gradient);
          if (truth.blur_sigma > 0.0) truth.active.push_back("focus_gradient");
          truth.batch_gain = batch_shift.gain;
          truth.batch_offset = batch_shift.offset;
          if (config.batch_shift.enabled) truth.active.push_back("batch_shift");
          truth.plate_gain = plate_shift.gain;
          truth.plate_offset = plate_shift.offset;
          if (config.plate_shift.enabled) truth.active.push_back("plate_shift");
          truth.lab_offset.assign(channels, 0.0);
          if (config.lab_source_signal.enabled && line.lab_source == LabSource::kB) {
            truth.lab_offset = config.lab_source_signal.offset;
            truth.active.push_back("lab_source_signal");
          }
          truth.phenotype = disease && config.phenotype_signal.enabled;
          if (truth.phenotype) truth.active.push_back("phenotype_signal");

          plan.manifest.sites.push_back(std::move(record));
          plan.truth.sites.push_back(std::move(truth));
        }
      }
    }
  }
  plan.manifest.Validate();
  return plan;
}

SiteImage RenderSite(const SimConfig& config, const SiteTruth& truth) {
  const CellModel& m = config.cells;
  const int h = config.height;
  const int w = config.width;
  const int channels = config.channels;
  RngStream stream =
      RngStream::Derive(config.root_seed, {"site", truth.key.ToString(), "pixels"});

  std::vector<double> background(static_cast<std::size_t>(h) * w * channels);
  for (std::size_t i = 0; i < background.size(); ++i) {
    background[i] = m.background[i % channels] + m.noise_std * stream.Normal();
  }

  // Cell signal, kept separate so that phenotype texture modulates cells only.
  std::vector<double> cells(background.size(), 0.0);
  const double nucleus_sigma = m.nucleus_radius / 2.0;
  for (const auto& cell : truth.cells) {
    for (int c = 0; c < channels; ++c) {
      const double sigma = nucleus_sigma * m.channel_spread[c];
      const double amplitude = m.channel_amplitude[c] * cell.amplitude;
      const int radius = static_cast<int>(std::ceil(4.0 * sigma));
      const int cx = static_cast<int>(std::lround(cell.x));
      const int cy = static_cast<int>(std::lround(cell.y));
      for (int y = std::max(0, cy - radius); y <= std::min(h - 1, cy + radius); ++y) {
        for (int x = std::max(0, cx - radius); x <= std::min(w - 1, cx + radius); ++x) {
          const double dx = x - cell.x;
          const double dy = y - cell.y;
          cells[(static_cast<std::size_t>(y) * w + x) * channels + c] +=
              amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        }
      }
    }
  }
  if (truth.phenotype) {
    const double effect = config.phenotype_signal.effect_size;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double texture = stream.Normal();
      if (i % channels == 0) continue;
      cells[i] *= std::max(0.0, 1.0 + effect * texture);
    }
  }

  SiteImage image(h, w, channels);
  auto data = image.mutable_data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = background[i] + cells[i] + truth.lab_offset[i % channels];
    data[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
  }
  image = ApplyAffineShift(image, AffineShift{truth.plate_gain, truth.plate_offset});
  image = ApplyAffineShift(image, AffineShift{truth.batch_gain, truth.batch_offset});
  if (truth.blur_sigma > 0.0) {
    image = InjectFocusGradient(image, truth.key.well, config.focus_gradient);
  }
  image.Clamp01();
  return image;
}

SiteImage RenderSite(const ExperimentPlan& plan, std::size_t index) {
  return RenderSite(plan.config, plan.truth.sites.at(index));
}

ExperimentPlan GenerateExperiment(const SimConfig& config,
                                  const std::filesystem::path& out_dir,
                                  int threads) {
  ExperimentPlan plan = PlanExperiment(config);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " +
                                    ec.message());
  }
  ParallelFor(plan.manifest.sites.size(), threads, [&](std::size_t i) {
    WriteImage(RenderSite(plan, i), out_dir / plan.manifest.sites[i].image_path);
  });
  SaveManifest(plan.manifest, out_dir / "manifest.jsonl");
  WriteFile(out_dir / "groundtruth.json", GroundTruthToJson(plan.truth));
  WriteFile(out_dir / "config.json", SimConfigToJson(config));
  if (!config.pairs.empty()) {
    json pairs = json::array();
    for (const auto& p : config.pairs) {
      pairs.push_back(json{{"healthy", p.healthy}, {"disease", p.disease}});
    }
    WriteFile(out_dir / "pairs.json", pairs.dump(2) + "\n");
  }
  return plan;
}

std::string GroundTruthToJson(const GroundTruth& truth) {
  json sites = json::array();
  for (const auto& s : truth.sites) {
    json cells = json::array();
    for (const auto& c : s.cells) cells.push_back(json::array({c.x, c.y, c.amplitude}));
    sites.push_back(json{{"key", s.key.ToString()},
                         {"expected_count", s.expected_count},
                         {"cell_count", s.cell_count},
                         {"cells", cells},
                         {"blur_sigma", s.blur_sigma},
                         {"batch_gain", VectorJson(s.batch_gain)},
                         {"batch_offset", VectorJson(s.batch_offset)},
                         {"plate_gain", VectorJson(s.plate_gain)},
                         {"plate_offset", VectorJson(s.plate_offset)},
                         {"lab_offset", VectorJson(s.lab_offset)},
                         {"phenotype", s.phenotype},
                         {"active", s.active}});
  }
  return json{{"sites", sites}}.dump() + "\n";
}

GroundTruth GroundTruthFromJson(const std::string& text) {
  GroundTruth truth;
  try {
    const json root = json::parse(text);
    for (const auto& s : root.at("sites")) {
      SiteTruth site;
      site.key = SiteKey::Parse(s.at("key").get<std::string>());
      site.expected_count = s.at("expected_count").get<double>();
      site.cell_count = s.at("cell_count").get<int>();
      for (const auto& c : s.at("cells")) {
        site.cells.push_back({c.at(0).get<double>(), c.at(1).get<double>(),
                              c.at(2).get<double>()});
      }
      site.blur_sigma = s.at("blur_sigma").get<double>();
      site.batch_gain = VectorFrom(s.at("batch_gain"));
      site.batch_offset = VectorFrom(s.at("batch_offset"));
      site.plate_gain = VectorFrom(s.at("plate_gain"));
      site.plate_offset = VectorFrom(s.at("plate_offset"));
      site.lab_offset = VectorFrom(s.at("lab_offset"));
      site.phenotype = s.at("phenotype").get<bool>();
      site.active = s.at("active").get<std::vector<std::string>>();
      truth.sites.push_back(std::move(site));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("ground truth: ") + e.what());
  }
  return truth;
}

}  // namespace plateaudit::simulate
