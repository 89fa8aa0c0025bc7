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

#ifndef PLATEAUDIT_CORE_MANIFEST_H_
#define PLATEAUDIT_CORE_MANIFEST_H_

#include <filesystem>
#include <string>

#include "plateaudit/core/types.h"

namespace plateaudit {

// JSON-lines manifest: a header object followed by one object per site.
std::string ManifestToJsonl(const ExperimentManifest& manifest);
ExperimentManifest ManifestFromJsonl(const std::string& text);

void SaveManifest(const ExperimentManifest& manifest,
                  const std::filesystem::path& path);
ExperimentManifest LoadManifest(const std::filesystem::path& path);

}  // namespace plateaudit

#endif  // PLATEAUDIT_CORE_MANIFEST_H_
