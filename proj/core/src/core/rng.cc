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

#include "plateaudit/core/rng.h"

#include <cmath>
#include <numbers>

#include "plateaudit/core/digest.h"
#include "plateaudit/core/error.h"

namespace plateaudit {
namespace {

constexpr uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

uint64_t FoldPath(uint64_t root_seed, const std::vector<std::string>& path) {
  uint64_t h = Mix64(root_seed);
  for (const auto& label : path) {
    // Length is folded in so that ("ab","c") and ("a","bc") differ.
    h = Mix64(h ^ Fnv1a64(label) ^ (label.size() * kGoldenGamma));
  }
  return h;
}

}  // namespace

RngStream::RngStream(uint64_t root_seed, std::vector<std::string> path)
    : root_seed_(root_seed),
      path_(std::move(path)),
      state_(FoldPath(root_seed_, path_)) {}

RngStream RngStream::Derive(uint64_t root_seed,
                            std::span<const std::string> path) {
  if (path.empty()) {
    throw Error(ErrorCode::kInput, "RNG stream path must be nonempty");
  }
  return RngStream(root_seed,
                   std::vector<std::string>(path.begin(), path.end()));
}

RngStream RngStream::Derive(uint64_t root_seed,
                            std::initializer_list<std::string_view> path) {
  std::vector<std::string> labels;
  labels.reserve(path.size());
  for (const auto label : path) labels.emplace_back(label);
  return Derive(root_seed, std::span<const std::string>(labels));
}

RngStream RngStream::Child(std::string_view label) const {
  std::vector<std::string> labels = path_;
  labels.emplace_back(label);
  return RngStream(root_seed_, std::move(labels));
}

uint64_t RngStream::NextU64() {
  state_ += kGoldenGamma;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RngStream::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double RngStream::Normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  double u1 = Uniform();
  while (u1 <= 0.0) u1 = Uniform();
  const double u2 = Uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return radius * std::cos(angle);
}

uint64_t RngStream::UniformIndex(uint64_t n) {
  if (n == 0) throw Error(ErrorCode::kInput, "UniformIndex(0)");
  // Rejection sampling removes modulo bias.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x = NextU64();
  while (x >= limit) x = NextU64();
  return x % n;
}

double RngStream::Gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw Error(ErrorCode::kInput, "Gamma requires positive shape and scale");
  }
  if (shape < 1.0) {
    // Boost: Gamma(a) = Gamma(a + 1) * U^(1/a).
    double u = Uniform();
    while (u <= 0.0) u = Uniform();
    return Gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = Normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = Uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v * scale;
    }
  }
}

uint64_t RngStream::Poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw Error(ErrorCode::kInput, "Poisson mean must be finite and >= 0");
  }
  constexpr double kChunk = 500.0;
  uint64_t total = 0;
  while (mean > kChunk) {
    total += Poisson(kChunk);
    mean -= kChunk;
  }
  if (mean == 0.0) return total;
  // Sequential-search inversion.
  double p = std::exp(-mean);
  double cdf = p;
  const double u = Uniform();
  uint64_t k = 0;
  while (u > cdf && p > 0.0) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return total + k;
}

}  // namespace plateaudit
