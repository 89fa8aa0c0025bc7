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

#include "plateaudit/core/manifest.h"

#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "plateaudit/core/error.h"
#include "plateaudit/core/io.h"

namespace plateaudit {
namespace {

using nlohmann::json;

constexpr int kManifestVersion = 1;

void RejectUnknownKeys(const json& object, const std::set<std::string>& allowed,
                       std::string_view where) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) {
      throw Error(ErrorCode::kFormat, "unknown key '" + key + "' in " +
                                          std::string(where));
    }
  }
}

template <typename T>
T Require(const json& object, const char* key, std::string_view where) {
  if (!object.contains(key)) {
    throw Error(ErrorCode::kFormat, "missing key '" + std::string(key) +
                                        "' in " + std::string(where));
  }
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kFormat, "key '" + std::string(key) +
                                        "' has the wrong type in " +
                                        std::string(where));
  }
}

json LineToJson(const CellLine& line) {
  return json{{"id", line.id},
              {"subject_id", line.subject_id},
              {"condition", ToString(line.condition)},
              {"subtype", line.subtype},
              {"lab_source", ToString(line.lab_source)}};
}

CellLine LineFromJson(const json& object) {
  const std::string where = "cell line";
  if (!object.is_object()) throw Error(ErrorCode::kFormat, "cell line is not an object");
  RejectUnknownKeys(object,
                    {"id", "subject_id", "condition", "subtype", "lab_source"},
                    where);
  CellLine line;
  line.id = Require<std::string>(object, "id", where);
  line.subject_id = Require<std::string>(object, "subject_id", where);
  line.condition = ParseCondition(Require<std::string>(object, "condition", where));
  line.subtype = Require<std::string>(object, "subtype", where);
  line.lab_source =
      ParseLabSource(Require<std::string>(object, "lab_source", where));
  return line;
}

}  // namespace

std::string ManifestToJsonl(const ExperimentManifest& manifest) {
  manifest.Validate();
  json lines = json::array();
  for (const auto& line : manifest.cell_lines) lines.push_back(LineToJson(line));
  std::string out =
      json{{"kind", "manifest"},
           {"version", kManifestVersion},
           {"config_digest", manifest.config_digest},
           {"cell_lines", lines}}
          .dump() +
      "\n";
  for (const auto& site : manifest.sites) {
    out += json{{"batch", site.key.batch},
                {"plate", site.key.plate},
                {"row", site.key.well.row},
                {"col", site.key.well.col},
                {"site", site.key.site_index},
                {"cell_line", site.cell_line},
                {"is_control", site.is_control},
                {"image_path", site.image_path}}
               .dump();
    out += '\n';
  }
  return out;
}

ExperimentManifest ManifestFromJsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  bool have_header = false;
  ExperimentManifest manifest;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    json object;
    try {
      object = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kFormat, "line " + std::to_string(line_number) +
                                          ": invalid JSON (" + e.what() + ")");
    }
    if (!object.is_object()) {
      throw Error(ErrorCode::kFormat,
                  "line " + std::to_string(line_number) + " is not an object");
    }
    const std::string where = "manifest line " + std::to_string(line_number);
    if (!have_header) {
      RejectUnknownKeys(object, {"kind", "version", "config_digest", "cell_lines"},
                        where);
      if (Require<std::string>(object, "kind", where) != "manifest") {
        throw Error(ErrorCode::kFormat, "first line is not a manifest header");
      }
      const int version = Require<int>(object, "version", where);
      if (version != kManifestVersion) {
        throw Error(ErrorCode::kFormat,
                    "unsupported manifest version " + std::to_string(version));
      }
      manifest.config_digest = Require<std::string>(object, "config_digest", where);
      const json lines = Require<json>(object, "cell_lines", where);
      if (!lines.is_array()) throw Error(ErrorCode::kFormat, "cell_lines is not an array");
      for (const auto& entry : lines) manifest.cell_lines.push_back(LineFromJson(entry));
      have_header = true;
      continue;
    }
    RejectUnknownKeys(object,
                      {"batch", "plate", "row", "col", "site", "cell_line",
                       "is_control", "image_path"},
                      where);
    SiteRecord site;
    site.key.batch = Require<std::string>(object, "batch", where);
    site.key.plate = Require<std::string>(object, "plate", where);
    site.key.well = WellAddress::Make(Require<int>(object, "row", where),
                                      Require<int>(object, "col", where));
    site.key.site_index = Require<int>(object, "site", where);
    site.cell_line = Require<std::string>(object, "cell_line", where);
    site.is_control = Require<bool>(object, "is_control", where);
    site.image_path = Require<std::string>(object, "image_path", where);
    manifest.sites.push_back(std::move(site));
  }
  if (!have_header) throw Error(ErrorCode::kFormat, "manifest has no header line");
  manifest.Validate();
  return manifest;
}

void SaveManifest(const ExperimentManifest& manifest,
                  const std::filesystem::path& path) {
  WriteFile(path, ManifestToJsonl(manifest));
}

ExperimentManifest LoadManifest(const std::filesystem::path& path) {
  return ManifestFromJsonl(ReadFile(path));
}

}  // namespace plateaudit
