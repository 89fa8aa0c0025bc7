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

#ifndef PLATEAUDIT_CORE_RNG_H_
#define PLATEAUDIT_CORE_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace plateaudit {

// A deterministic random stream addressed by (root seed, label path).
//
// The initial state is a splitmix64 hash fold of the seed and every label, so
// a stream never depends on how many values other streams have produced. All
// samplers are implemented here (rather than via <random> distributions) so
// that sequences are identical across standard library implementations.
class RngStream {
 public:
  // Throws Error(kInput) when `path` is empty.
  static RngStream Derive(uint64_t root_seed, std::span<const std::string> path);
  static RngStream Derive(uint64_t root_seed,
                          std::initializer_list<std::string_view> path);

  // A new stream whose path is this stream's path plus `label`. Independent of
  // the parent's consumed state.
  RngStream Child(std::string_view label) const;

  uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Standard normal via Box-Muller; the second variate is cached.
  double Normal();
  // Uniform integer in [0, n). n must be > 0.
  uint64_t UniformIndex(uint64_t n);
  // Gamma(shape, scale) via Marsaglia-Tsang.
  double Gamma(double shape, double scale);
  // Poisson(mean) by inversion; large means are split into additive chunks.
  uint64_t Poisson(double mean);

  // Fisher-Yates shuffle driven by UniformIndex.
  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(UniformIndex(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  uint64_t root_seed() const { return root_seed_; }
  const std::vector<std::string>& path() const { return path_; }

 private:
  RngStream(uint64_t root_seed, std::vector<std::string> path);

  uint64_t root_seed_;
  std::vector<std::string> path_;
  uint64_t state_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace plateaudit

#endif  // PLATEAUDIT_CORE_RNG_H_
