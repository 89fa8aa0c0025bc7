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

#include "plateaudit/imaging/focus.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "plateaudit/core/error.h"
#include "plateaudit/imaging/filters.h"
#include "plateaudit/learn/metrics.h"

namespace plateaudit::imaging {
namespace {

constexpr double kLogFloor = 1e-12;

double MeanSquare(std::span<const double> v) {
  double s = 0.0;
  for (const double x : v) s += x * x;
  return s / static_cast<double>(v.size());
}

double MeanSquaredDifference(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - b[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

}  // namespace

const std::vector<std::string>& FocusFeatureNames() {
  static const std::vector<std::string> names = {
      "log_laplacian_energy", "log_gradient_energy", "log_band_0_1",
      "log_band_1_2", "log_band_2_4"};
  return names;
}

FocusFeatures ComputeFocusFeatures(const SiteImage& image) {
  FocusFeatures out;
  out.values.assign(kFocusFeatureCount, 0.0);
  const int h = image.height();
  const int w = image.width();
  int used = 0;
  for (int c = 0; c < image.channels(); ++c) {
    const std::vector<float> plane = image.Channel(c);
    double mean = 0.0;
    for (const float v : plane) mean += v;
    mean /= static_cast<double>(plane.size());
    double var = 0.0;
    for (const float v : plane) var += (v - mean) * (v - mean);
    var /= static_cast<double>(plane.size());
    if (var <= 1e-14) continue;
    const std::vector<float> g1 = BlurPlane(plane, h, w, 1.0);
    const std::vector<float> g2 = BlurPlane(plane, h, w, 2.0);
    const std::vector<float> g4 = BlurPlane(plane, h, w, 4.0);
    const double energies[kFocusFeatureCount] = {
        MeanSquare(Laplacian(plane, h, w)),
        [&] {
          const auto g = GradientSquared(plane, h, w);
          return std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
        }(),
        MeanSquaredDifference(plane, g1),
        MeanSquaredDifference(g1, g2),
        MeanSquaredDifference(g2, g4),
    };
    for (int f = 0; f < kFocusFeatureCount; ++f) {
      out.values[f] += std::log(energies[f] / var + kLogFloor);
    }
    ++used;
  }
  if (used == 0) {
    out.degenerate = true;
    return out;
  }
  for (double& v : out.values) v /= used;
  return out;
}

FocusModel TrainFocusModel(std::span<const SiteImage> sharp_patches,
                           std::span<const double> blur_levels, RngStream& rng,
                           const FocusTrainingOptions& options) {
  if (sharp_patches.size() < 50) {
    throw Error(ErrorCode::kConfig, "focus training needs at least 50 patches, got " +
                                        std::to_string(sharp_patches.size()));
  }
  if (blur_levels.size() < 2) {
    throw Error(ErrorCode::kConfig, "focus training needs at least two blur levels");
  }
  for (std::size_t k = 0; k < blur_levels.size(); ++k) {
    if (!std::isfinite(blur_levels[k]) || blur_levels[k] < 0.0) {
      throw Error(ErrorCode::kConfig, "blur levels must be finite and >= 0");
    }
    if (k > 0 && !(blur_levels[k] > blur_levels[k - 1])) {
      throw Error(ErrorCode::kConfig,
                  "blur levels must be strictly increasing (duplicate or unordered sigma)");
    }
  }
  std::vector<std::size_t> chosen(sharp_patches.size());
  std::iota(chosen.begin(), chosen.end(), 0);
  if (static_cast<int>(chosen.size()) > options.max_patches) {
    rng.Shuffle(chosen);
    chosen.resize(options.max_patches);
    std::sort(chosen.begin(), chosen.end());
  }
  const int levels = static_cast<int>(blur_levels.size());
  Eigen::MatrixXd x(static_cast<Eigen::Index>(chosen.size()) * levels, kFocusFeatureCount);
  std::vector<int> y;
  y.reserve(static_cast<std::size_t>(x.rows()));
  Eigen::Index row = 0;
  for (const std::size_t p : chosen) {
    for (int k = 0; k < levels; ++k) {
      const FocusFeatures f = ComputeFocusFeatures(GaussianBlur(sharp_patches[p], blur_levels[k]));
      for (int j = 0; j < kFocusFeatureCount; ++j) x(row, j) = f.values[j];
      y.push_back(k);
      ++row;
    }
  }
  std::vector<std::string> classes;
  for (int k = 0; k < levels; ++k) classes.push_back(std::to_string(k));
  learn::LogisticOptions fit;
  fit.lambda = options.lambda;
  fit.max_iter = options.max_iter;
  fit.tol = options.tol;
  FocusModel model;
  model.blur_levels.assign(blur_levels.begin(), blur_levels.end());
  model.classifier = learn::TrainLogistic(x, y, classes, fit, FocusFeatureNames());
  if (!model.classifier.convergence.converged) {
    throw Error(ErrorCode::kConvergence,
                "focus model did not converge: " +
                    std::to_string(model.classifier.convergence.iterations) +
                    " iterations, gradient norm " +
                    std::to_string(model.classifier.convergence.gradient_norm) +
                    " (tol " + std::to_string(options.tol) + ")");
  }
  return model;
}

double ExpectedRankScore(std::span<const double> level_probabilities) {
  const std::size_t levels = level_probabilities.size();
  if (levels < 2) throw Error(ErrorCode::kInput, "need at least two levels");
  double score = 0.0;
  for (std::size_t k = 0; k < levels; ++k) {
    score += level_probabilities[k] *
             (1.0 - static_cast<double>(k) / static_cast<double>(levels - 1));
  }
  return std::clamp(score, 0.0, 1.0);
}

FocusScore ScoreFocus(const FocusModel& model, const SiteImage& image) {
  const FocusFeatures f = ComputeFocusFeatures(image);
  if (f.degenerate) return {0.0, true};
  const Eigen::MatrixXd x =
      Eigen::Map<const Eigen::RowVectorXd>(f.values.data(), kFocusFeatureCount);
  const Eigen::MatrixXd p = learn::PredictProba(model.classifier, x);
  const std::vector<double> probs(p.data(), p.data() + p.size());
  return {ExpectedRankScore(probs), false};
}

FocusGradientSummary SummarizeFocusGradient(const SiteValueMap& scores) {
  std::map<WellAddress, std::pair<double, int>> wells;
  for (const auto& [site, v] : scores) {
    auto& acc = wells[site.first];
    acc.first += v;
    ++acc.second;
  }
  const auto well_mean = [&](int r, int c) {
    const auto it = wells.find(WellAddress::Make(r, c));
    if (it == wells.end()) {
      throw Error(ErrorCode::kInput, "no focus score for well " + WellAddress{r, c}.Label());
    }
    return it->second.first / it->second.second;
  };
  const double center =
      (well_mean(3, 5) + well_mean(3, 6) + well_mean(4, 5) + well_mean(4, 6)) / 4.0;
  const double corner = (well_mean(0, 0) + well_mean(0, kPlateCols - 1) +
                         well_mean(kPlateRows - 1, 0) +
                         well_mean(kPlateRows - 1, kPlateCols - 1)) /
                        4.0;
  std::vector<double> means, distances;
  for (const auto& [well, acc] : wells) {
    means.push_back(acc.first / acc.second);
    distances.push_back(well.NormalizedCenterDistance());
  }
  FocusGradientSummary out;
  out.center_minus_corner = center - corner;
  out.wells = static_cast<int>(wells.size());
  try {
    out.spearman = learn::SpearmanCorrelation(means, distances);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateInput) throw;
    out.spearman = 0.0;
  }
  return out;
}

std::string FocusModelToJson(const FocusModel& model) {
  nlohmann::json out{
      {"kind", "focus_model"},
      {"blur_levels", model.blur_levels},
      {"classifier", nlohmann::json::parse(learn::LogisticModelToJson(model.classifier))}};
  return out.dump(2) + "\n";
}

FocusModel FocusModelFromJson(const std::string& text) {
  FocusModel model;
  try {
    const auto in = nlohmann::json::parse(text);
    if (in.at("kind").get<std::string>() != "focus_model") {
      throw Error(ErrorCode::kFormat, "not a focus model");
    }
    model.blur_levels = in.at("blur_levels").get<std::vector<double>>();
    model.classifier = learn::LogisticModelFromJson(in.at("classifier").dump());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("focus model: ") + e.what());
  }
  if (model.blur_levels.size() < 2 ||
      model.classifier.num_classes() != static_cast<int>(model.blur_levels.size()) ||
      model.classifier.input_dim() != kFocusFeatureCount) {
    throw Error(ErrorCode::kFormat, "focus model: inconsistent dimensions");
  }
  return model;
}

}  // namespace plateaudit::imaging
