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

#ifndef PLATEAUDIT_LEARN_FOLDS_H_
#define PLATEAUDIT_LEARN_FOLDS_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plateaudit/core/types.h"

namespace plateaudit::learn {

enum class FoldScheme { kLeavePairOut, kLeaveBatchOut };

std::string_view ToString(FoldScheme scheme);

// Anything a fold can hold out: a site or a patch.
struct FoldUnit {
  std::string key;
  std::string cell_line;
  std::string batch;
};

struct FoldSpec {
  int id = 0;
  FoldScheme scheme = FoldScheme::kLeavePairOut;
  std::vector<std::string> train_keys;
  std::vector<std::string> test_keys;
  // Leave-pair-out folds carry "healthy", "disease", "healthy_lab",
  // "disease_lab" and "same_source" ("true"/"false"); leave-batch-out folds
  // carry "batch".
  std::map<std::string, std::string> annotations;
};

struct LinePair {
  std::string healthy;
  std::string disease;
};

// One fold per pair: the pair's units are the test set, every other unit is
// training data. Throws Error(kPairing) for unknown ids, reused ids or pairs
// whose conditions are not one healthy and one disease, and
// Error(kValidation) when a fold would have an empty train or test set.
std::vector<FoldSpec> MakeFoldsLeavePairOut(std::span<const CellLine> lines,
                                            std::span<const LinePair> pairs,
                                            std::span<const FoldUnit> units);

// One fold per batch, batches in sorted order. Throws Error(kConfig) with
// fewer than two batches.
std::vector<FoldSpec> MakeFoldsLeaveBatchOut(std::span<const FoldUnit> units);

std::vector<FoldUnit> FoldUnitsFromManifest(const ExperimentManifest& manifest,
                                            bool include_controls = false);

// pairs.json: [{"healthy": id, "disease": id}, ...]
std::vector<LinePair> ParsePairsJson(const std::string& text);
std::string PairsToJson(std::span<const LinePair> pairs);

}  // namespace plateaudit::learn

#endif  // PLATEAUDIT_LEARN_FOLDS_H_
