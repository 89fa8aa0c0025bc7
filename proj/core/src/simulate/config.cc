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

#include "plateaudit/simulate/config.h"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "plateaudit/core/digest.h"
#include "plateaudit/core/error.h"
#include "plateaudit/core/image.h"

namespace plateaudit::simulate {
namespace {

using nlohmann::json;

// Reads keys from one JSON object, remembering which were consumed so that
// leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string where)
      : object_(object), where_(std::move(where)) {
    if (!object_.is_object()) {
      throw Error(ErrorCode::kConfig, where_ + " must be an object");
    }
  }

  template <typename T>
  void Read(const char* key, T& out) {
    seen_.insert(key);
    if (!object_.contains(key)) return;
    try {
      out = object_.at(key).get<T>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::kConfig,
                  where_ + "." + key + " has the wrong type");
    }
  }

  const json* Get(const char* key) {
    seen_.insert(key);
    return object_.contains(key) ? &object_.at(key) : nullptr;
  }

  std::string Path(const char* key) const { return where_ + "." + key; }

  void Finish() const {
    for (const auto& [key, value] : object_.items()) {
      if (!seen_.contains(key)) {
        throw Error(ErrorCode::kConfig,
                    "unknown key '" + key + "' in " + where_);
      }
    }
  }

 private:
  const json& object_;
  std::string where_;
  std::set<std::string> seen_;
};

WellAddress WellFromJson(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number_integer() ||
      !value[1].is_number_integer()) {
    throw Error(ErrorCode::kConfig, where + " wells must be [row, col] pairs");
  }
  try {
    return WellAddress::Make(value[0].get<int>(), value[1].get<int>());
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, where + ": " + e.detail());
  }
}

json WellsToJson(const std::vector<WellAddress>& wells) {
  json out = json::array();
  for (const auto& w : wells) out.push_back(json::array({w.row, w.col}));
  return out;
}

void ReadAffine(ObjectReader& parent, const char* key, AffineShiftParams& out) {
  const json* value = parent.Get(key);
  if (value == nullptr) return;
  ObjectReader reader(*value, parent.Path(key));
  reader.Read("enabled", out.enabled);
  // "std" is shorthand for equal gain and offset deviations.
  double shared = -1.0;
  reader.Read("std", shared);
  if (shared >= 0.0) {
    out.gain_std = shared;
    out.offset_std = shared;
  }
  reader.Read("gain_std", out.gain_std);
  reader.Read("offset_std", out.offset_std);
  reader.Finish();
}

json AffineToJson(const AffineShiftParams& p) {
  return json{{"enabled", p.enabled},
              {"gain_std", p.gain_std},
              {"offset_std", p.offset_std}};
}

void RequireFinite(double value, const std::string& what) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kConfig, what + " must be finite");
  }
}

void RequireChannelVector(const std::vector<double>& values, int channels,
                          const std::string& what) {
  if (static_cast<int>(values.size()) != channels) {
    throw Error(ErrorCode::kConfig, what + " needs one value per channel (" +
                                        std::to_string(channels) + ")");
  }
  for (const double v : values) RequireFinite(v, what);
}

}  // namespace

void SimConfig::Validate() const {
  const auto positive = [](int v, const char* what) {
    if (v < 1) {
      throw Error(ErrorCode::kConfig, std::string(what) + " must be >= 1");
    }
  };
  positive(batches, "batches");
  positive(plates_per_batch, "plates_per_batch");
  positive(sites_per_well, "sites_per_well");
  positive(channels, "channels");
  if (height < kMinImageSide || width < kMinImageSide) {
    throw Error(ErrorCode::kConfig, "image height and width must be >= 16");
  }
  if (cell_lines.empty()) {
    throw Error(ErrorCode::kConfig, "at least one cell line is required");
  }
  RequireFinite(cells.count_mean_healthy, "cells.count_mean_healthy");
  RequireFinite(cells.count_mean_disease, "cells.count_mean_disease");
  if (cells.count_mean_healthy < 0.0 || cells.count_mean_disease < 0.0) {
    throw Error(ErrorCode::kConfig, "cell count means must be >= 0");
  }
  if (!(cells.count_shape > 0.0) || !std::isfinite(cells.count_shape)) {
    throw Error(ErrorCode::kConfig, "cells.count_shape must be > 0");
  }
  if (!(cells.nucleus_radius > 0.0) || !std::isfinite(cells.nucleus_radius)) {
    throw Error(ErrorCode::kConfig, "cells.nucleus_radius must be > 0");
  }
  RequireChannelVector(cells.channel_amplitude, channels, "cells.channel_amplitude");
  RequireChannelVector(cells.channel_spread, channels, "cells.channel_spread");
  RequireChannelVector(cells.background, channels, "cells.background");
  for (const double s : cells.channel_spread) {
    if (!(s > 0.0)) throw Error(ErrorCode::kConfig, "channel_spread must be > 0");
  }
  RequireFinite(cells.amplitude_cv, "cells.amplitude_cv");
  RequireFinite(cells.noise_std, "cells.noise_std");
  RequireFinite(cells.min_separation, "cells.min_separation");
  if (cells.amplitude_cv < 0.0 || cells.noise_std < 0.0 ||
      cells.min_separation < 0.0) {
    throw Error(ErrorCode::kConfig,
                "amplitude_cv, noise_std and min_separation must be >= 0");
  }

  std::set<std::string> ids;
  bool any_explicit = false;
  bool all_explicit = true;
  for (const auto& placement : cell_lines) {
    try {
      ValidateId(placement.line.id, "cell line");
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, e.detail());
    }
    if (!ids.insert(placement.line.id).second) {
      throw Error(ErrorCode::kConfig,
                  "duplicate cell line id '" + placement.line.id + "'");
    }
    any_explicit |= !placement.wells.empty();
    all_explicit &= !placement.wells.empty();
  }
  if (any_explicit && !all_explicit) {
    throw Error(ErrorCode::kConfig,
                "either every cell line lists wells or none does");
  }
  if (control.enabled) {
    try {
      ValidateId(control.line_id, "control line");
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, e.detail());
    }
    if (ids.contains(control.line_id)) {
      throw Error(ErrorCode::kConfig, "control line id '" + control.line_id +
                                          "' collides with a cell line");
    }
    if (control.layout != "checkerboard" && control.layout != "explicit") {
      throw Error(ErrorCode::kConfig,
                  "control.layout must be 'checkerboard' or 'explicit'");
    }
    if (control.layout == "explicit" && control.wells.empty()) {
      throw Error(ErrorCode::kConfig, "explicit control layout needs wells");
    }
  }
  std::set<std::string> paired;
  for (const auto& pair : pairs) {
    for (const auto* id : {&pair.healthy, &pair.disease}) {
      if (!ids.contains(*id)) {
        throw Error(ErrorCode::kConfig, "pair references unknown line '" + *id + "'");
      }
      if (!paired.insert(*id).second) {
        throw Error(ErrorCode::kConfig, "line '" + *id + "' appears in two pairs");
      }
    }
  }

  if (focus_gradient.sigma_max < 0.0 || !std::isfinite(focus_gradient.sigma_max)) {
    throw Error(ErrorCode::kConfig, "focus_gradient.sigma_max must be >= 0");
  }
  if (!(focus_gradient.gamma > 0.0) || !std::isfinite(focus_gradient.gamma)) {
    throw Error(ErrorCode::kConfig, "focus_gradient.gamma must be > 0");
  }
  for (const auto* shift : {&batch_shift, &plate_shift}) {
    RequireFinite(shift->gain_std, "shift gain_std");
    RequireFinite(shift->offset_std, "shift offset_std");
    if (shift->gain_std < 0.0 || shift->offset_std < 0.0) {
      throw Error(ErrorCode::kConfig, "shift standard deviations must be >= 0");
    }
  }
  if (!(density_confound.delta > 0.0) || !std::isfinite(density_confound.delta)) {
    throw Error(ErrorCode::kConfig, "density_confound.delta must be > 0");
  }
  RequireChannelVector(lab_source_signal.offset, channels,
                       "lab_source_signal.offset");
  RequireFinite(phenotype_signal.effect_size, "phenotype_signal.effect_size");
}

SimConfig DefaultSimConfig() {
  SimConfig config;
  for (int i = 1; i <= 6; ++i) {
    const std::string n = std::to_string(i);
    LinePlacement healthy;
    healthy.line = CellLine{"H" + n, "S-H" + n, Condition::kHealthy, "healthy",
                            LabSource::kA};
    LinePlacement disease;
    disease.line = CellLine{"D" + n, "S-D" + n, Condition::kDisease, "disease",
                            i == 6 ? LabSource::kA : LabSource::kB};
    config.cell_lines.push_back(healthy);
    config.cell_lines.push_back(disease);
    config.pairs.push_back({"H" + n, "D" + n});
  }
  return config;
}

SimConfig SimConfigFromJson(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, std::string("invalid JSON: ") + e.what());
  }
  SimConfig config = DefaultSimConfig();
  ObjectReader reader(root, "config");
  reader.Read("root_seed", config.root_seed);
  reader.Read("batches", config.batches);
  reader.Read("plates_per_batch", config.plates_per_batch);
  reader.Read("sites_per_well", config.sites_per_well);
  if (const json* image = reader.Get("image")) {
    ObjectReader r(*image, reader.Path("image"));
    r.Read("height", config.height);
    r.Read("width", config.width);
    r.Read("channels", config.channels);
    r.Finish();
  }
  if (const json* cells = reader.Get("cells")) {
    ObjectReader r(*cells, reader.Path("cells"));
    CellModel& m = config.cells;
    r.Read("count_mean_healthy", m.count_mean_healthy);
    r.Read("count_mean_disease", m.count_mean_disease);
    r.Read("count_shape", m.count_shape);
    r.Read("nucleus_radius", m.nucleus_radius);
    r.Read("channel_amplitude", m.channel_amplitude);
    r.Read("channel_spread", m.channel_spread);
    r.Read("amplitude_cv", m.amplitude_cv);
    r.Read("background", m.background);
    r.Read("noise_std", m.noise_std);
    r.Read("min_separation", m.min_separation);
    r.Finish();
  }
  if (const json* lines = reader.Get("cell_lines")) {
    if (!lines->is_array()) {
      throw Error(ErrorCode::kConfig, "config.cell_lines must be an array");
    }
    config.cell_lines.clear();
    // Lines given explicitly replace the default pairing unless pairs are
    // also given.
    config.pairs.clear();
    for (std::size_t i = 0; i < lines->size(); ++i) {
      const std::string where = "config.cell_lines[" + std::to_string(i) + "]";
      ObjectReader r((*lines)[i], where);
      LinePlacement placement;
      std::string condition = "healthy";
      std::string lab = "A";
      r.Read("id", placement.line.id);
      r.Read("subject_id", placement.line.subject_id);
      r.Read("condition", condition);
      r.Read("subtype", placement.line.subtype);
      r.Read("lab_source", lab);
      try {
        placement.line.condition = ParseCondition(condition);
        placement.line.lab_source = ParseLabSource(lab);
      } catch (const Error& e) {
        throw Error(ErrorCode::kConfig, where + ": " + e.detail());
      }
      if (placement.line.subject_id.empty()) {
        placement.line.subject_id = placement.line.id;
      }
      if (const json* wells = r.Get("wells")) {
        if (!wells->is_array()) {
          throw Error(ErrorCode::kConfig, where + ".wells must be an array");
        }
        for (const auto& w : *wells) placement.wells.push_back(WellFromJson(w, where));
      }
      r.Finish();
      config.cell_lines.push_back(std::move(placement));
    }
  }
  if (const json* pairs = reader.Get("pairs")) {
    if (!pairs->is_array()) {
      throw Error(ErrorCode::kConfig, "config.pairs must be an array");
    }
    config.pairs.clear();
    for (std::size_t i = 0; i < pairs->size(); ++i) {
      ObjectReader r((*pairs)[i], "config.pairs[" + std::to_string(i) + "]");
      LinePairIds pair;
      r.Read("healthy", pair.healthy);
      r.Read("disease", pair.disease);
      r.Finish();
      config.pairs.push_back(pair);
    }
  }
  if (const json* control = reader.Get("control")) {
    ObjectReader r(*control, reader.Path("control"));
    r.Read("enabled", config.control.enabled);
    r.Read("line_id", config.control.line_id);
    r.Read("layout", config.control.layout);
    if (const json* wells = r.Get("wells")) {
      if (!wells->is_array()) {
        throw Error(ErrorCode::kConfig, "config.control.wells must be an array");
      }
      config.control.wells.clear();
      for (const auto& w : *wells) {
        config.control.wells.push_back(WellFromJson(w, "config.control"));
      }
    }
    r.Finish();
  }
  if (const json* nuisance = reader.Get("nuisance")) {
    ObjectReader r(*nuisance, reader.Path("nuisance"));
    if (const json* focus = r.Get("focus_gradient")) {
      ObjectReader f(*focus, r.Path("focus_gradient"));
      f.Read("enabled", config.focus_gradient.enabled);
      f.Read("sigma_max", config.focus_gradient.sigma_max);
      f.Read("gamma", config.focus_gradient.gamma);
      f.Finish();
    }
    ReadAffine(r, "batch_shift", config.batch_shift);
    ReadAffine(r, "plate_shift", config.plate_shift);
    if (const json* density = r.Get("density_confound")) {
      ObjectReader d(*density, r.Path("density_confound"));
      d.Read("enabled", config.density_confound.enabled);
      d.Read("delta", config.density_confound.delta);
      d.Finish();
    }
    if (const json* lab = r.Get("lab_source_signal")) {
      ObjectReader l(*lab, r.Path("lab_source_signal"));
      l.Read("enabled", config.lab_source_signal.enabled);
      l.Read("offset", config.lab_source_signal.offset);
      l.Finish();
    }
    r.Finish();
  }
  if (const json* phenotype = reader.Get("phenotype_signal")) {
    ObjectReader p(*phenotype, reader.Path("phenotype_signal"));
    p.Read("enabled", config.phenotype_signal.enabled);
    p.Read("effect_size", config.phenotype_signal.effect_size);
    p.Finish();
  }
  reader.Finish();
  config.Validate();
  return config;
}

std::string SimConfigToJson(const SimConfig& config) {
  json lines = json::array();
  for (const auto& p : config.cell_lines) {
    json line{{"id", p.line.id},
              {"subject_id", p.line.subject_id},
              {"condition", ToString(p.line.condition)},
              {"subtype", p.line.subtype},
              {"lab_source", ToString(p.line.lab_source)}};
    if (!p.wells.empty()) line["wells"] = WellsToJson(p.wells);
    lines.push_back(std::move(line));
  }
  json pairs = json::array();
  for (const auto& p : config.pairs) {
    pairs.push_back(json{{"healthy", p.healthy}, {"disease", p.disease}});
  }
  const CellModel& m = config.cells;
  json root{
      {"root_seed", config.root_seed},
      {"batches", config.batches},
      {"plates_per_batch", config.plates_per_batch},
      {"sites_per_well", config.sites_per_well},
      {"image",
       {{"height", config.height},
        {"width", config.width},
        {"channels", config.channels}}},
      {"cells",
       {{"count_mean_healthy", m.count_mean_healthy},
        {"count_mean_disease", m.count_mean_disease},
        {"count_shape", m.count_shape},
        {"nucleus_radius", m.nucleus_radius},
        {"channel_amplitude", m.channel_amplitude},
        {"channel_spread", m.channel_spread},
        {"amplitude_cv", m.amplitude_cv},
        {"background", m.background},
        {"noise_std", m.noise_std},
        {"min_separation", m.min_separation}}},
      {"cell_lines", lines},
      {"pairs", pairs},
      {"control",
       {{"enabled", config.control.enabled},
        {"line_id", config.control.line_id},
        {"layout", config.control.layout},
        {"wells", WellsToJson(config.control.wells)}}},
      {"nuisance",
       {{"focus_gradient",
         {{"enabled", config.focus_gradient.enabled},
          {"sigma_max", config.focus_gradient.sigma_max},
          {"gamma", config.focus_gradient.gamma}}},
        {"batch_shift", AffineToJson(config.batch_shift)},
        {"plate_shift", AffineToJson(config.plate_shift)},
        {"density_confound",
         {{"enabled", config.density_confound.enabled},
          {"delta", config.density_confound.delta}}},
        {"lab_source_signal",
         {{"enabled", config.lab_source_signal.enabled},
          {"offset", config.lab_source_signal.offset}}}}},
      {"phenotype_signal",
       {{"enabled", config.phenotype_signal.enabled},
        {"effect_size", config.phenotype_signal.effect_size}}},
  };
  return root.dump(2) + "\n";
}

std::string ConfigDigest(const SimConfig& config) {
  return DigestOf(SimConfigToJson(config));
}

}  // namespace plateaudit::simulate
