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

#ifndef PLATEAUDIT_TESTS_TESTING_FIXTURES_H_
#define PLATEAUDIT_TESTS_TESTING_FIXTURES_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "plateaudit/core/image.h"
#include "plateaudit/features/table.h"
#include "plateaudit/simulate/config.h"
#include "plateaudit/simulate/simulator.h"

namespace plateaudit::testing {

// Two batches of one plate each with one site per well (192 sites).
simulate::SimConfig SmallConfig(uint64_t seed = 1);

// Renders and featurizes an experiment without touching the disk.
features::FeatureTable SimulateTable(const simulate::SimConfig& config, int threads = 1);

// Deletes itself on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

SiteImage ConstantImage(int height, int width, int channels, float value);

// Isotropic Gaussian spots of the given peak on every channel over a zero
// background.
SiteImage SpotImage(int height, int width, int channels,
                    const std::vector<std::pair<double, double>>& centers, double sigma,
                    float peak);

}  // namespace plateaudit::testing

#endif  // PLATEAUDIT_TESTS_TESTING_FIXTURES_H_
