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

#include "plateaudit/features/table.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "plateaudit/core/error.h"
#include "plateaudit/core/io.h"
#include "plateaudit/core/parallel.h"
#include "plateaudit/features/features.h"
#include "plateaudit/imaging/patches.h"

namespace plateaudit::features {
namespace {

std::string Where(std::size_t line, std::size_t column, std::string_view name) {
  return "line " + std::to_string(line) + " column " + std::to_string(column + 1) +
         " ('" + std::string(name) + "')";
}

double ParseCell(std::string_view cell, std::size_t line, std::size_t column,
                 std::string_view name) {
  const auto value = ParseDouble(cell);
  if (!value) {
    throw Error(ErrorCode::kParse, "non-numeric value '" + std::string(cell) + "' at " +
                                       Where(line, column, name));
  }
  return *value;
}

int ParseIntCell(std::string_view cell, std::size_t line, std::size_t column,
                 std::string_view name) {
  const auto value = ParseInt(cell);
  if (!value) {
    throw Error(ErrorCode::kParse, "non-integer value '" + std::string(cell) + "' at " +
                                       Where(line, column, name));
  }
  return *value;
}

std::string_view SiteKeyPart(std::string_view key) {
  const std::size_t hash = key.find('#');
  return hash == std::string_view::npos ? key : key.substr(0, hash);
}

}  // namespace

const std::vector<std::string>& MetaColumns() {
  static const std::vector<std::string> columns = {
      "batch", "plate", "row", "col", "site", "cell_line", "condition", "lab_source",
      "is_control"};
  return columns;
}

void FeatureTable::Validate() const {
  std::set<std::string_view> seen;
  for (const FeatureRow& row : rows) {
    if (!seen.insert(row.key).second) {
      throw Error(ErrorCode::kValidation, "duplicate feature row key " + row.key);
    }
    if (static_cast<int>(row.values.size()) != width()) {
      throw Error(ErrorCode::kValidation, "row " + row.key + " has " +
                                              std::to_string(row.values.size()) +
                                              " values, expected " + std::to_string(width()));
    }
    for (std::size_t j = 0; j < row.values.size(); ++j) {
      if (!std::isfinite(row.values[j])) {
        throw Error(ErrorCode::kValidation,
                    "non-finite value in row " + row.key + " feature " + feature_names[j]);
      }
    }
  }
}

void FeatureTable::SortByKey() {
  std::sort(rows.begin(), rows.end(),
            [](const FeatureRow& a, const FeatureRow& b) { return a.key < b.key; });
}

Eigen::MatrixXd FeatureTable::Matrix() const {
  Eigen::MatrixXd x(size(), width());
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < width(); ++j) x(i, j) = rows[i].values[j];
  }
  return x;
}

int FeatureTable::FeatureIndex(std::string_view name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) {
    throw Error(ErrorCode::kSchema, "feature '" + std::string(name) + "' not in table");
  }
  return static_cast<int>(it - feature_names.begin());
}

FeatureTable FeatureTable::Filter(const std::function<bool(const FeatureRow&)>& keep) const {
  FeatureTable out;
  out.feature_names = feature_names;
  for (const FeatureRow& row : rows) {
    if (keep(row)) out.rows.push_back(row);
  }
  return out;
}

std::string MetaValue(const RowMeta& meta, std::string_view column) {
  if (column == "batch") return meta.batch;
  if (column == "plate") return meta.plate;
  if (column == "row") return std::to_string(meta.row);
  if (column == "col" || column == "column") return std::to_string(meta.col);
  if (column == "site") return std::to_string(meta.site);
  if (column == "well") return WellAddress{meta.row, meta.col}.Label();
  if (column == "cell_line") return meta.cell_line;
  if (column == "condition") return meta.condition;
  if (column == "lab_source") return meta.lab_source;
  if (column == "is_control") return meta.is_control ? "true" : "false";
  throw Error(ErrorCode::kInput, "unknown metadata column '" + std::string(column) + "'");
}

RowMeta MetaFor(const ExperimentManifest& manifest, const SiteRecord& site) {
  const CellLine* line = manifest.FindLine(site.cell_line);
  if (line == nullptr) {
    throw Error(ErrorCode::kValidation, "site " + site.key.ToString() +
                                            " references unknown cell line " +
                                            site.cell_line);
  }
  RowMeta meta;
  meta.batch = site.key.batch;
  meta.plate = site.key.plate;
  meta.row = site.key.well.row;
  meta.col = site.key.well.col;
  meta.site = site.key.site_index;
  meta.cell_line = line->id;
  meta.condition = std::string(ToString(line->condition));
  meta.lab_source = std::string(ToString(line->lab_source));
  meta.is_control = site.is_control;
  return meta;
}

std::string FeatureTableToCsv(const FeatureTable& table) {
  std::string out = "key";
  for (const auto& c : MetaColumns()) out += "," + c;
  for (const auto& f : table.feature_names) out += "," + f;
  out += "\n";
  for (const FeatureRow& row : table.rows) {
    const RowMeta& m = row.meta;
    out += row.key + "," + m.batch + "," + m.plate + "," + std::to_string(m.row) + "," +
           std::to_string(m.col) + "," + std::to_string(m.site) + "," + m.cell_line + "," +
           m.condition + "," + m.lab_source + "," + (m.is_control ? "true" : "false");
    for (const double v : row.values) out += "," + FormatSignificant(v, 9);
    out += "\n";
  }
  return out;
}

FeatureTable FeatureTableFromCsv(std::string_view text) {
  const std::vector<std::string_view> lines = SplitLines(text);
  if (lines.empty()) throw Error(ErrorCode::kParse, "empty feature table");
  const std::vector<std::string_view> header = SplitCsvLine(lines[0]);
  const std::size_t meta_count = MetaColumns().size();
  if (header.size() < meta_count + 2 || header[0] != "key") {
    throw Error(ErrorCode::kParse, "feature table header must start with key and metadata columns");
  }
  for (std::size_t j = 0; j < meta_count; ++j) {
    if (header[j + 1] != MetaColumns()[j]) {
      throw Error(ErrorCode::kParse, "expected column '" + MetaColumns()[j] + "' at " +
                                         Where(1, j + 1, header[j + 1]));
    }
  }
  FeatureTable table;
  for (std::size_t j = meta_count + 1; j < header.size(); ++j) {
    table.feature_names.emplace_back(header[j]);
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::vector<std::string_view> cells = SplitCsvLine(lines[i]);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(i + 1) + " has " +
                                         std::to_string(cells.size()) + " cells, expected " +
                                         std::to_string(header.size()));
    }
    FeatureRow row;
    row.key = std::string(cells[0]);
    row.meta.batch = std::string(cells[1]);
    row.meta.plate = std::string(cells[2]);
    row.meta.row = ParseIntCell(cells[3], i + 1, 3, header[3]);
    row.meta.col = ParseIntCell(cells[4], i + 1, 4, header[4]);
    row.meta.site = ParseIntCell(cells[5], i + 1, 5, header[5]);
    row.meta.cell_line = std::string(cells[6]);
    row.meta.condition = std::string(cells[7]);
    row.meta.lab_source = std::string(cells[8]);
    if (cells[9] == "true" || cells[9] == "1") {
      row.meta.is_control = true;
    } else if (cells[9] == "false" || cells[9] == "0") {
      row.meta.is_control = false;
    } else {
      throw Error(ErrorCode::kParse, "bad boolean '" + std::string(cells[9]) + "' at " +
                                         Where(i + 1, 9, header[9]));
    }
    for (std::size_t j = meta_count + 1; j < cells.size(); ++j) {
      row.values.push_back(ParseCell(cells[j], i + 1, j, header[j]));
    }
    table.rows.push_back(std::move(row));
  }
  table.Validate();
  return table;
}

void SaveFeatureTable(const std::filesystem::path& path, const FeatureTable& table) {
  WriteFile(path, FeatureTableToCsv(table));
}

FeatureTable LoadFeatureTable(const std::filesystem::path& path) {
  try {
    return FeatureTableFromCsv(ReadFile(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

FeatureTable ImportExternalEmbeddings(std::string_view csv,
                                      const ExperimentManifest& manifest) {
  const std::vector<std::string_view> lines = SplitLines(csv);
  if (lines.empty()) throw Error(ErrorCode::kParse, "empty embedding file");
  const std::vector<std::string_view> header = SplitCsvLine(lines[0]);
  if (header.size() < 2 || header[0] != "key") {
    throw Error(ErrorCode::kParse, "embedding header must be 'key' followed by feature columns");
  }
  std::map<std::string, const SiteRecord*, std::less<>> sites;
  for (const SiteRecord& s : manifest.sites) sites.emplace(s.key.ToString(), &s);

  FeatureTable table;
  for (std::size_t j = 1; j < header.size(); ++j) table.feature_names.emplace_back(header[j]);
  std::size_t unmatched = 0;
  std::string first_unmatched;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::vector<std::string_view> cells = SplitCsvLine(lines[i]);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(i + 1) + " has " +
                                         std::to_string(cells.size()) + " cells, expected " +
                                         std::to_string(header.size()));
    }
    FeatureRow row;
    row.key = std::string(cells[0]);
    for (std::size_t j = 1; j < cells.size(); ++j) {
      row.values.push_back(ParseCell(cells[j], i + 1, j, header[j]));
    }
    const auto it = sites.find(SiteKeyPart(row.key));
    if (it == sites.end()) {
      if (unmatched++ == 0) first_unmatched = row.key;
      continue;
    }
    row.meta = MetaFor(manifest, *it->second);
    table.rows.push_back(std::move(row));
  }
  if (unmatched > 0) {
    throw Error(ErrorCode::kJoin, std::to_string(unmatched) +
                                      " embedding keys not found in manifest (first: " +
                                      first_unmatched + ")");
  }
  table.Validate();
  table.SortByKey();
  return table;
}

FeatureUnit ParseFeatureUnit(std::string_view text) {
  if (text == "site") return FeatureUnit::kSite;
  if (text == "patch") return FeatureUnit::kPatch;
  throw Error(ErrorCode::kInput, "unit must be 'site' or 'patch', got '" + std::string(text) + "'");
}

FeatureTable Featurize(const ExperimentManifest& manifest, const SiteLoader& load,
                       const FeaturizeOptions& options) {
  std::vector<std::vector<FeatureRow>> per_site(manifest.sites.size());
  ParallelFor(manifest.sites.size(), options.threads, [&](std::size_t i) {
    const SiteRecord& site = manifest.sites[i];
    const RowMeta meta = MetaFor(manifest, site);
    const SiteImage image = load(i);
    const imaging::SegmentationResult seg =
        imaging::SegmentNuclei(image, options.segmentation);
    const std::string key = site.key.ToString();
    if (options.unit == FeatureUnit::kSite) {
      per_site[i].push_back({key, meta, ExtractFeatures(image, seg.detections)});
      return;
    }
    const std::vector<imaging::CellPatch> patches =
        imaging::CropPatches(image, site.key, seg.detections, options.patch_size);
    for (std::size_t p = 0; p < patches.size(); ++p) {
      per_site[i].push_back({key + "#" + std::to_string(p), meta,
                             ExtractFeatures(patches[p].data,
                                             std::span(seg.detections).subspan(p, 1))});
    }
  });
  FeatureTable table;
  table.feature_names = FeatureNames();
  for (auto& rows : per_site) {
    for (auto& row : rows) table.rows.push_back(std::move(row));
  }
  table.SortByKey();
  table.Validate();
  return table;
}

SiteLoader FileSiteLoader(const ExperimentManifest& manifest, std::filesystem::path base_dir) {
  return [&manifest, base_dir = std::move(base_dir)](std::size_t i) {
    std::filesystem::path path = manifest.sites[i].image_path;
    if (path.is_relative()) path = base_dir / path;
    return ReadImage(path);
  };
}

}  // namespace plateaudit::features
