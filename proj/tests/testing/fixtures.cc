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

#include "testing/fixtures.h"

#include <atomic>
#include <cmath>

#include <unistd.h>

namespace plateaudit::testing {

simulate::SimConfig SmallConfig(uint64_t seed) {
  simulate::SimConfig config = simulate::DefaultSimConfig();
  config.root_seed = seed;
  config.batches = 2;
  config.plates_per_batch = 1;
  config.sites_per_well = 1;
  return config;
}

features::FeatureTable SimulateTable(const simulate::SimConfig& config, int threads) {
  const simulate::ExperimentPlan plan = simulate::PlanExperiment(config);
  features::FeaturizeOptions options;
  options.threads = threads;
  return features::Featurize(
      plan.manifest, [&](std::size_t i) { return simulate::RenderSite(plan, i); }, options);
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("plateaudit_test_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter.fetch_add(1)));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

SiteImage ConstantImage(int height, int width, int channels, float value) {
  SiteImage image(height, width, channels);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) image.at(y, x, c) = value;
    }
  }
  return image;
}

SiteImage SpotImage(int height, int width, int channels,
                    const std::vector<std::pair<double, double>>& centers, double sigma,
                    float peak) {
  SiteImage image(height, width, channels);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = 0.0;
      for (const auto& [cx, cy] : centers) {
        const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        v += peak * std::exp(-d2 / (2 * sigma * sigma));
      }
      for (int c = 0; c < channels; ++c) image.at(y, x, c) = static_cast<float>(std::min(v, 1.0));
    }
  }
  return image;
}

}  // namespace plateaudit::testing
