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

#ifndef PLATEAUDIT_FEATURES_TABLE_H_
#define PLATEAUDIT_FEATURES_TABLE_H_

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "plateaudit/core/image.h"
#include "plateaudit/core/types.h"
#include "plateaudit/imaging/segment.h"

namespace plateaudit::features {

struct RowMeta {
  std::string batch;
  std::string plate;
  int row = 0;
  int col = 0;
  int site = 0;
  std::string cell_line;
  std::string condition;
  std::string lab_source;
  bool is_control = false;

  bool operator==(const RowMeta&) const = default;
};

// Metadata columns in CSV order.
const std::vector<std::string>& MetaColumns();

struct FeatureRow {
  // Site key, or "<site key>#<i>" for the i-th patch of a site.
  std::string key;
  RowMeta meta;
  std::vector<double> values;
};

struct FeatureTable {
  std::vector<std::string> feature_names;
  std::vector<FeatureRow> rows;

  int width() const { return static_cast<int>(feature_names.size()); }
  int size() const { return static_cast<int>(rows.size()); }

  // Unique keys, row widths and finiteness. Throws Error(kValidation).
  void Validate() const;
  void SortByKey();
  Eigen::MatrixXd Matrix() const;
  int FeatureIndex(std::string_view name) const;
  FeatureTable Filter(const std::function<bool(const FeatureRow&)>& keep) const;
};

// Value of a metadata column ("batch", "plate", "row", "column"/"col",
// "site", "cell_line", "condition", "lab_source", "is_control", "well").
// Throws Error(kInput) for unknown columns.
std::string MetaValue(const RowMeta& meta, std::string_view column);

RowMeta MetaFor(const ExperimentManifest& manifest, const SiteRecord& site);

std::string FeatureTableToCsv(const FeatureTable& table);
// Throws Error(kParse) with row and column on malformed input.
FeatureTable FeatureTableFromCsv(std::string_view text);
void SaveFeatureTable(const std::filesystem::path& path, const FeatureTable& table);
FeatureTable LoadFeatureTable(const std::filesystem::path& path);

// CSV with a "key" column followed by numeric columns. Keys are site keys or
// patch keys of sites in `manifest`; metadata is joined from it. Non-numeric
// cells raise Error(kParse) naming row and column; keys absent from the
// manifest raise Error(kJoin) with their count.
FeatureTable ImportExternalEmbeddings(std::string_view csv,
                                      const ExperimentManifest& manifest);

enum class FeatureUnit { kSite, kPatch };
FeatureUnit ParseFeatureUnit(std::string_view text);

struct FeaturizeOptions {
  FeatureUnit unit = FeatureUnit::kSite;
  imaging::SegmentationOptions segmentation;
  int patch_size = 48;
  int threads = 1;
};

using SiteLoader = std::function<SiteImage(std::size_t site_index)>;

// Segments and featurizes every manifest site; rows sorted by key. Output is
// independent of the thread count.
FeatureTable Featurize(const ExperimentManifest& manifest, const SiteLoader& load,
                       const FeaturizeOptions& options = {});

// Loader reading image_path relative to `base_dir`.
SiteLoader FileSiteLoader(const ExperimentManifest& manifest,
                          std::filesystem::path base_dir);

}  // namespace plateaudit::features

#endif  // PLATEAUDIT_FEATURES_TABLE_H_
