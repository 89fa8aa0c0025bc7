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

#ifndef PLATEAUDIT_CORE_TYPES_H_
#define PLATEAUDIT_CORE_TYPES_H_

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace plateaudit {

// Plates are always 96-well, 8 rows by 12 columns.
inline constexpr int kPlateRows = 8;
inline constexpr int kPlateCols = 12;
inline constexpr double kPlateCenterRow = 3.5;
inline constexpr double kPlateCenterCol = 5.5;

struct WellAddress {
  int row = 0;
  int col = 0;

  // Throws Error(kValidation) outside the 8x12 grid.
  static WellAddress Make(int row, int col);

  // "A01" .. "H12".
  std::string Label() const;

  // Euclidean distance from the plate center scaled so the corner wells
  // are at 1.
  double NormalizedCenterDistance() const;

  auto operator<=>(const WellAddress&) const = default;
};

struct SiteKey {
  std::string batch;
  std::string plate;
  WellAddress well;
  int site_index = 0;

  // "batch/plate/r3c5/s2". Ids may not contain '/', ',', '#' or whitespace.
  std::string ToString() const;
  static SiteKey Parse(std::string_view text);

  auto operator<=>(const SiteKey&) const = default;
};

// Throws Error(kValidation) when `id` is empty or contains a reserved
// character. `what` names the field in the message.
void ValidateId(std::string_view id, std::string_view what);

enum class Condition { kHealthy, kDisease };
enum class LabSource { kA, kB };

std::string_view ToString(Condition condition);
std::string_view ToString(LabSource source);
Condition ParseCondition(std::string_view text);
LabSource ParseLabSource(std::string_view text);

struct CellLine {
  std::string id;
  std::string subject_id;
  Condition condition = Condition::kHealthy;
  // Free-form subtype label, e.g. "sma2" or "TDPmut".
  std::string subtype;
  LabSource lab_source = LabSource::kA;

  bool operator==(const CellLine&) const = default;
};

struct SiteRecord {
  SiteKey key;
  std::string cell_line;
  std::string image_path;
  bool is_control = false;

  bool operator==(const SiteRecord&) const = default;
};

struct ExperimentManifest {
  std::vector<SiteRecord> sites;
  std::vector<CellLine> cell_lines;
  std::string config_digest;

  // Checks key uniqueness, id syntax and that every site references a known
  // cell line. A dangling reference produces an error listing the offending
  // sites and line ids.
  void Validate() const;

  const CellLine* FindLine(std::string_view id) const;

  bool operator==(const ExperimentManifest&) const = default;
};

}  // namespace plateaudit

#endif  // PLATEAUDIT_CORE_TYPES_H_
