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

#include "plateaudit/learn/folds.h"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "plateaudit/core/error.h"

namespace plateaudit::learn {

std::string_view ToString(FoldScheme scheme) {
  return scheme == FoldScheme::kLeavePairOut ? "leave-pair-out" : "leave-batch-out";
}

std::vector<FoldSpec> MakeFoldsLeavePairOut(std::span<const CellLine> lines,
                                            std::span<const LinePair> pairs,
                                            std::span<const FoldUnit> units) {
  const auto find = [&](const std::string& id) -> const CellLine& {
    const auto it = std::find_if(lines.begin(), lines.end(),
                                 [&](const CellLine& l) { return l.id == id; });
    if (it == lines.end()) {
      throw Error(ErrorCode::kPairing, "pair references unknown cell line '" + id + "'");
    }
    return *it;
  };
  std::set<std::string> used;
  std::vector<FoldSpec> folds;
  for (const auto& pair : pairs) {
    const CellLine& healthy = find(pair.healthy);
    const CellLine& disease = find(pair.disease);
    for (const auto* id : {&pair.healthy, &pair.disease}) {
      if (!used.insert(*id).second) {
        throw Error(ErrorCode::kPairing, "cell line '" + *id + "' is in more than one pair");
      }
    }
    if (healthy.condition != Condition::kHealthy ||
        disease.condition != Condition::kDisease) {
      throw Error(ErrorCode::kPairing, "pair (" + pair.healthy + ", " + pair.disease +
                                           ") is not one healthy and one disease line");
    }
    FoldSpec fold;
    fold.id = static_cast<int>(folds.size());
    fold.scheme = FoldScheme::kLeavePairOut;
    for (const auto& unit : units) {
      const bool held_out = unit.cell_line == pair.healthy || unit.cell_line == pair.disease;
      (held_out ? fold.test_keys : fold.train_keys).push_back(unit.key);
    }
    if (fold.test_keys.empty()) {
      throw Error(ErrorCode::kValidation,
                  "pair (" + pair.healthy + ", " + pair.disease + ") has no units");
    }
    if (fold.train_keys.empty()) {
      throw Error(ErrorCode::kValidation, "holding out pair (" + pair.healthy + ", " +
                                              pair.disease + ") leaves the training set empty");
    }
    fold.annotations["healthy"] = pair.healthy;
    fold.annotations["disease"] = pair.disease;
    fold.annotations["healthy_lab"] = std::string(ToString(healthy.lab_source));
    fold.annotations["disease_lab"] = std::string(ToString(disease.lab_source));
    fold.annotations["same_source"] =
        healthy.lab_source == disease.lab_source ? "true" : "false";
    folds.push_back(std::move(fold));
  }
  return folds;
}

std::vector<FoldSpec> MakeFoldsLeaveBatchOut(std::span<const FoldUnit> units) {
  std::set<std::string> batches;
  for (const auto& unit : units) batches.insert(unit.batch);
  if (batches.size() < 2) {
    throw Error(ErrorCode::kConfig, "leave-batch-out needs at least two batches");
  }
  std::vector<FoldSpec> folds;
  for (const auto& batch : batches) {
    FoldSpec fold;
    fold.id = static_cast<int>(folds.size());
    fold.scheme = FoldScheme::kLeaveBatchOut;
    for (const auto& unit : units) {
      (unit.batch == batch ? fold.test_keys : fold.train_keys).push_back(unit.key);
    }
    fold.annotations["batch"] = batch;
    folds.push_back(std::move(fold));
  }
  return folds;
}

std::vector<FoldUnit> FoldUnitsFromManifest(const ExperimentManifest& manifest,
                                            bool include_controls) {
  std::vector<FoldUnit> units;
  for (const auto& site : manifest.sites) {
    if (site.is_control && !include_controls) continue;
    units.push_back({site.key.ToString(), site.cell_line, site.key.batch});
  }
  return units;
}

std::vector<LinePair> ParsePairsJson(const std::string& text) {
  using nlohmann::json;
  std::vector<LinePair> pairs;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("pairs file: ") + e.what());
  }
  if (!root.is_array()) throw Error(ErrorCode::kParse, "pairs file must hold an array");
  for (const auto& entry : root) {
    if (!entry.is_object() || entry.size() != 2 || !entry.contains("healthy") ||
        !entry.contains("disease") || !entry["healthy"].is_string() ||
        !entry["disease"].is_string()) {
      throw Error(ErrorCode::kParse,
                  "each pair must be {\"healthy\": id, \"disease\": id}");
    }
    pairs.push_back({entry["healthy"].get<std::string>(), entry["disease"].get<std::string>()});
  }
  return pairs;
}

std::string PairsToJson(std::span<const LinePair> pairs) {
  nlohmann::json root = nlohmann::json::array();
  for (const auto& p : pairs) root.push_back({{"healthy", p.healthy}, {"disease", p.disease}});
  return root.dump(2) + "\n";
}

}  // namespace plateaudit::learn
