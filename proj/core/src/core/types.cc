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

#include "plateaudit/core/types.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "plateaudit/core/error.h"

namespace plateaudit {
namespace {

int ParseInt(std::string_view text, std::string_view what) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorCode::kParse,
                "invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

WellAddress WellAddress::Make(int row, int col) {
  if (row < 0 || row >= kPlateRows || col < 0 || col >= kPlateCols) {
    throw Error(ErrorCode::kValidation,
                "well (" + std::to_string(row) + ", " + std::to_string(col) +
                    ") outside the 8x12 plate");
  }
  return WellAddress{row, col};
}

std::string WellAddress::Label() const {
  std::string label(1, static_cast<char>('A' + row));
  if (col + 1 < 10) label += '0';
  label += std::to_string(col + 1);
  return label;
}

double WellAddress::NormalizedCenterDistance() const {
  const double corner = std::hypot(kPlateCenterRow, kPlateCenterCol);
  return std::hypot(row - kPlateCenterRow, col - kPlateCenterCol) / corner;
}

void ValidateId(std::string_view id, std::string_view what) {
  if (id.empty()) {
    throw Error(ErrorCode::kValidation, std::string(what) + " id is empty");
  }
  for (const char c : id) {
    if (c == '/' || c == ',' || c == '#' || c == '"' ||
        std::isspace(static_cast<unsigned char>(c))) {
      throw Error(ErrorCode::kValidation,
                  std::string(what) + " id '" + std::string(id) +
                      "' contains a reserved character");
    }
  }
}

std::string SiteKey::ToString() const {
  return batch + "/" + plate + "/r" + std::to_string(well.row) + "c" +
         std::to_string(well.col) + "/s" + std::to_string(site_index);
}

SiteKey SiteKey::Parse(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t slash = text.find('/', start);
    parts.push_back(text.substr(start, slash - start));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  const auto bad = [&] {
    return Error(ErrorCode::kParse,
                 "malformed site key '" + std::string(text) + "'");
  };
  if (parts.size() != 4 || !parts[2].starts_with('r') ||
      !parts[3].starts_with('s')) {
    throw bad();
  }
  const std::size_t c_pos = parts[2].find('c');
  if (c_pos == std::string_view::npos) throw bad();
  SiteKey key;
  key.batch = std::string(parts[0]);
  key.plate = std::string(parts[1]);
  key.well = WellAddress::Make(ParseInt(parts[2].substr(1, c_pos - 1), "row"),
                               ParseInt(parts[2].substr(c_pos + 1), "col"));
  key.site_index = ParseInt(parts[3].substr(1), "site index");
  if (key.site_index < 0) throw bad();
  return key;
}

std::string_view ToString(Condition condition) {
  return condition == Condition::kHealthy ? "healthy" : "disease";
}

std::string_view ToString(LabSource source) {
  return source == LabSource::kA ? "A" : "B";
}

Condition ParseCondition(std::string_view text) {
  if (text == "healthy") return Condition::kHealthy;
  if (text == "disease") return Condition::kDisease;
  throw Error(ErrorCode::kParse,
              "unknown condition '" + std::string(text) + "'");
}

LabSource ParseLabSource(std::string_view text) {
  if (text == "A") return LabSource::kA;
  if (text == "B") return LabSource::kB;
  throw Error(ErrorCode::kParse,
              "unknown lab source '" + std::string(text) + "'");
}

void ExperimentManifest::Validate() const {
  std::set<std::string> line_ids;
  for (const auto& line : cell_lines) {
    ValidateId(line.id, "cell line");
    if (!line_ids.insert(line.id).second) {
      throw Error(ErrorCode::kValidation,
                  "duplicate cell line id '" + line.id + "'");
    }
  }
  std::set<SiteKey> keys;
  // Missing line id -> offending sites.
  std::map<std::string, std::vector<std::string>> dangling;
  for (const auto& site : sites) {
    ValidateId(site.key.batch, "batch");
    ValidateId(site.key.plate, "plate");
    WellAddress::Make(site.key.well.row, site.key.well.col);
    if (site.key.site_index < 0) {
      throw Error(ErrorCode::kValidation,
                  "negative site index in " + site.key.ToString());
    }
    if (!keys.insert(site.key).second) {
      throw Error(ErrorCode::kValidation,
                  "duplicate site key " + site.key.ToString());
    }
    if (!line_ids.contains(site.cell_line)) {
      dangling[site.cell_line].push_back(site.key.ToString());
    }
  }
  if (!dangling.empty()) {
    std::string message = "sites reference unknown cell lines:";
    for (const auto& [line, offenders] : dangling) {
      message += " '" + line + "' (" + std::to_string(offenders.size()) +
                 " sites, first " + offenders.front() + ")";
    }
    throw Error(ErrorCode::kValidation, message);
  }
}

const CellLine* ExperimentManifest::FindLine(std::string_view id) const {
  const auto it = std::find_if(cell_lines.begin(), cell_lines.end(),
                               [&](const CellLine& l) { return l.id == id; });
  return it == cell_lines.end() ? nullptr : &*it;
}

}  // namespace plateaudit
