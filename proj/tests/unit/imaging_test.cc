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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include <gtest/gtest.h>

#include "plateaudit/core/error.h"
#include "plateaudit/core/rng.h"
#include "plateaudit/imaging/filters.h"
#include "plateaudit/imaging/focus.h"
#include "plateaudit/imaging/heatmap.h"
#include "plateaudit/imaging/patches.h"
#include "plateaudit/imaging/saliency.h"
#include "plateaudit/imaging/segment.h"
#include "plateaudit/simulate/simulator.h"
#include "testing/fixtures.h"

namespace plateaudit::imaging {
namespace {

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInput;
}

double BetweenClassVariance(const std::vector<float>& values, double threshold) {
  double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
  for (const float v : values) {
    if (v > threshold) {
      ++n1;
      s1 += v;
    } else {
      ++n0;
      s0 += v;
    }
  }
  if (n0 == 0 || n1 == 0) return 0.0;
  const double d = s0 / n0 - s1 / n1;
  return n0 * n1 * d * d;
}

TEST(OtsuTest, MatchesBruteForceSplit) {
  RngStream rng = RngStream::Derive(3, {"otsu"});
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<float> values;
    const double a = rng.Uniform() * 0.4, b = 0.5 + rng.Uniform() * 0.5;
    const int n0 = 50 + static_cast<int>(rng.UniformIndex(400));
    const int n1 = 50 + static_cast<int>(rng.UniformIndex(400));
    for (int i = 0; i < n0; ++i) values.push_back(static_cast<float>(a + 0.05 * rng.Normal()));
    for (int i = 0; i < n1; ++i) values.push_back(static_cast<float>(b + 0.05 * rng.Normal()));
    // Oracle: exhaustive search over every cut between sorted values.
    std::vector<float> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    double best = 0.0;
    for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
      best = std::max(best, BetweenClassVariance(values, sorted[k]));
    }
    const OtsuResult otsu = OtsuThreshold(values);
    ASSERT_FALSE(otsu.degenerate);
    EXPECT_GE(BetweenClassVariance(values, otsu.threshold), 0.995 * best) << trial;
  }
}

TEST(OtsuTest, DegenerateInputs) {
  EXPECT_TRUE(OtsuThreshold(std::vector<float>{}).degenerate);
  EXPECT_TRUE(OtsuThreshold(std::vector<float>(10, 0.3f)).degenerate);
}

TEST(FilterTest, BlurPreservesConstantsAndKernelSumsToOne) {
  for (const double sigma : {0.5, 1.0, 2.5, 4.0}) {
    const auto kernel = GaussianKernel(sigma);
    EXPECT_NEAR(std::accumulate(kernel.begin(), kernel.end(), 0.0), 1.0, 1e-12);
    const SiteImage blurred = GaussianBlur(testing::ConstantImage(20, 24, 2, 0.37f), sigma);
    for (const float v : blurred.data()) EXPECT_NEAR(v, 0.37f, 1e-6);
  }
  const SiteImage image = testing::SpotImage(20, 20, 1, {{10, 10}}, 2.0, 0.9f);
  EXPECT_EQ(GaussianBlur(image, 0.0), image);
}

std::vector<std::pair<double, double>> GridCenters() {
  std::vector<std::pair<double, double>> centers;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) centers.emplace_back(10.0 + 15.0 * j, 10.0 + 15.0 * i + 0.3);
  }
  return centers;
}

TEST(SegmentTest, FindsWellSeparatedSpots) {
  const auto centers = GridCenters();
  const SiteImage image = testing::SpotImage(80, 80, 2, centers, 2.0, 0.9f);
  const SegmentationResult result = SegmentNuclei(image);
  ASSERT_FALSE(result.degenerate);
  ASSERT_EQ(result.detections.size(), 25u);
  for (const auto& [cx, cy] : centers) {
    const auto nearest = std::min_element(
        result.detections.begin(), result.detections.end(),
        [&](const NucleusDetection& a, const NucleusDetection& b) {
          return std::hypot(a.x - cx, a.y - cy) < std::hypot(b.x - cx, b.y - cy);
        });
    EXPECT_LT(std::hypot(nearest->x - cx, nearest->y - cy), 0.5);
    EXPECT_GE(nearest->area_px, 5);
  }
  EXPECT_TRUE(std::is_sorted(result.detections.begin(), result.detections.end(),
                             [](const NucleusDetection& a, const NucleusDetection& b) {
                               return std::tie(a.y, a.x) < std::tie(b.y, b.x);
                             }));
}

TEST(SegmentTest, ConstantImageIsDegenerate) {
  const SegmentationResult result = SegmentNuclei(testing::ConstantImage(32, 32, 1, 0.2f));
  EXPECT_TRUE(result.degenerate);
  EXPECT_TRUE(result.detections.empty());
}

TEST(SegmentTest, MinAreaDropsSpeckles) {
  SiteImage image = testing::SpotImage(40, 40, 1, {{20, 20}}, 2.5, 0.9f);
  image.at(3, 3, 0) = 1.0f;
  SegmentationOptions options;
  options.min_area = 1;
  EXPECT_EQ(SegmentNuclei(image, options).detections.size(), 2u);
  options.min_area = 5;
  EXPECT_EQ(SegmentNuclei(image, options).detections.size(), 1u);
}

TEST(SegmentTest, CsvRows) {
  const std::vector<NucleusDetection> d = {{1.5, 2.25, 7, 0.5}};
  EXPECT_EQ(DetectionsToCsvRows("s", d), "s,1.5,2.25,7,0.5\n");
}

TEST(PatchTest, CropsCenteredAndPadsAtEdges) {
  SiteImage image(64, 64, 2);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      image.at(y, x, 0) = static_cast<float>(y) / 64.0f;
      image.at(y, x, 1) = static_cast<float>(x) / 64.0f;
    }
  }
  const std::vector<NucleusDetection> d = {{30.2, 31.7, 10, 0.5}, {2.0, 60.0, 10, 0.5}};
  const auto patches = CropPatches(image, SiteKey{}, d, 16);
  ASSERT_EQ(patches.size(), 2u);
  EXPECT_FALSE(patches[0].padded);
  EXPECT_EQ(patches[0].data.height(), 16);
  // Rounded center (30, 32) lands at patch index (8, 8).
  EXPECT_FLOAT_EQ(patches[0].data.at(8, 8, 0), 32.0f / 64.0f);
  EXPECT_FLOAT_EQ(patches[0].data.at(8, 8, 1), 30.0f / 64.0f);
  EXPECT_TRUE(patches[1].padded);
  EXPECT_FLOAT_EQ(patches[1].data.at(0, 0, 1), 0.0f);
  EXPECT_FLOAT_EQ(patches[1].data.at(15, 0, 0), 63.0f / 64.0f);
}

TEST(PatchTest, RejectsBadSizes) {
  const SiteImage image = testing::ConstantImage(32, 32, 1, 0.1f);
  const std::vector<NucleusDetection> d = {{10, 10, 5, 0.5}};
  EXPECT_EQ(CodeOf([&] { CropPatches(image, SiteKey{}, d, 17); }), ErrorCode::kInput);
  EXPECT_EQ(CodeOf([&] { CropPatches(image, SiteKey{}, d, 14); }), ErrorCode::kInput);
  EXPECT_EQ(CodeOf([&] { CropPatches(image, SiteKey{}, d, 48); }), ErrorCode::kInput);
}

TEST(FocusTest, SharpnessFeaturesDecreaseWithBlur) {
  const SiteImage image = testing::SpotImage(48, 48, 5, GridCenters(), 1.2, 0.9f);
  std::vector<double> previous = ComputeFocusFeatures(image).values;
  ASSERT_EQ(previous.size(), static_cast<std::size_t>(kFocusFeatureCount));
  for (const double sigma : {0.5, 1.0, 2.0, 3.0}) {
    const std::vector<double> current = ComputeFocusFeatures(GaussianBlur(image, sigma)).values;
    // Laplacian and gradient energies fall monotonically as blur grows.
    EXPECT_LT(current[0], previous[0]) << sigma;
    EXPECT_LT(current[1], previous[1]) << sigma;
    previous = current;
  }
  EXPECT_TRUE(ComputeFocusFeatures(testing::ConstantImage(32, 32, 5, 0.5f)).degenerate);
}

TEST(FocusTest, ExpectedRankScore) {
  EXPECT_DOUBLE_EQ(ExpectedRankScore(std::vector<double>{1, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(ExpectedRankScore(std::vector<double>{0, 0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(ExpectedRankScore(std::vector<double>{0.25, 0.25, 0.25, 0.25}), 0.5);
  EXPECT_DOUBLE_EQ(ExpectedRankScore(std::vector<double>{0.2, 0.8}), 0.2);
}

std::vector<SiteImage> SharpPatches(int sites) {
  const simulate::ExperimentPlan plan = simulate::PlanExperiment(testing::SmallConfig(5));
  std::vector<SiteImage> out;
  for (int i = 0; i < sites; ++i) {
    const SiteImage image = simulate::RenderSite(plan, i);
    const auto detections = SegmentNuclei(image).detections;
    for (auto& p : CropPatches(image, plan.manifest.sites[i].key, detections, 32)) {
      out.push_back(std::move(p.data));
    }
  }
  return out;
}

TEST(FocusTest, TrainingValidatesInputs) {
  const std::vector<SiteImage> few(10, testing::ConstantImage(32, 32, 5, 0.5f));
  const std::vector<SiteImage> many = SharpPatches(6);
  ASSERT_GE(many.size(), 50u);
  RngStream rng = RngStream::Derive(1, {"focus"});
  EXPECT_EQ(CodeOf([&] { TrainFocusModel(few, std::vector<double>{0, 1}, rng); }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([&] { TrainFocusModel(many, std::vector<double>{0}, rng); }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([&] { TrainFocusModel(many, std::vector<double>{0, 2, 1}, rng); }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([&] { TrainFocusModel(many, std::vector<double>{-1, 2}, rng); }),
            ErrorCode::kConfig);
}

TEST(FocusTest, ScoreFallsWithBlurAndModelRoundTrips) {
  const std::vector<SiteImage> patches = SharpPatches(12);
  RngStream rng = RngStream::Derive(1, {"focus"});
  const std::vector<double> levels = {0, 1, 2, 3, 4};
  const FocusModel model = TrainFocusModel(patches, levels, rng);
  const simulate::ExperimentPlan plan = simulate::PlanExperiment(testing::SmallConfig(11));
  const SiteImage site = simulate::RenderSite(plan, 3);
  double previous = 2.0;
  for (const double sigma : {0.0, 1.0, 2.0, 3.0}) {
    const FocusScore s = ScoreFocus(model, GaussianBlur(site, sigma));
    ASSERT_FALSE(s.degenerate);
    EXPECT_LT(s.score, previous) << sigma;
    EXPECT_GE(s.score, 0.0);
    EXPECT_LE(s.score, 1.0);
    previous = s.score;
  }
  const FocusModel loaded = FocusModelFromJson(FocusModelToJson(model));
  EXPECT_EQ(FocusModelToJson(loaded), FocusModelToJson(model));
  EXPECT_NEAR(ScoreFocus(loaded, site).score, ScoreFocus(model, site).score, 1e-9);
  EXPECT_TRUE(ScoreFocus(model, testing::ConstantImage(64, 64, 5, 0.4f)).degenerate);
  EXPECT_EQ(CodeOf([] { FocusModelFromJson(R"({"kind":"other"})"); }), ErrorCode::kFormat);
}

SiteValueMap FullPlate(const std::function<double(WellAddress)>& value) {
  SiteValueMap map;
  for (int r = 0; r < kPlateRows; ++r) {
    for (int c = 0; c < kPlateCols; ++c) {
      const WellAddress w = WellAddress::Make(r, c);
      map[{w, 0}] = value(w);
      map[{w, 1}] = value(w);
    }
  }
  return map;
}

TEST(FocusTest, GradientSummary) {
  const auto radial = FullPlate([](WellAddress w) { return 1.0 - w.NormalizedCenterDistance(); });
  const FocusGradientSummary s = SummarizeFocusGradient(radial);
  EXPECT_EQ(s.wells, 96);
  EXPECT_GT(s.center_minus_corner, 0.8);
  EXPECT_NEAR(s.spearman, -1.0, 1e-12);
  const FocusGradientSummary flat = SummarizeFocusGradient(FullPlate([](WellAddress) { return 0.5; }));
  EXPECT_DOUBLE_EQ(flat.center_minus_corner, 0.0);
  EXPECT_DOUBLE_EQ(flat.spearman, 0.0);
}

TEST(HeatmapTest, RampEndpointsAndDeterminism) {
  EXPECT_EQ(RampHex(0.0), "#440154");
  EXPECT_EQ(RampHex(1.0), "#fde725");
  EXPECT_EQ(RampHex(-3.0), "#440154");
  const auto values = FullPlate([](WellAddress w) { return w.row * 0.1 + w.col; });
  const std::string a = PlateHeatmapSvg(values, 2, "focus <b0>");
  EXPECT_EQ(a, PlateHeatmapSvg(values, 2, "focus <b0>"));
  EXPECT_NE(a.find("focus &lt;b0&gt;"), std::string::npos);
  EXPECT_NE(a.find("#440154"), std::string::npos);
  EXPECT_NE(a.find("#fde725"), std::string::npos);
  EXPECT_EQ(a.find("#bdbdbd"), std::string::npos);
}

TEST(HeatmapTest, MissingConstantAndInvalidValues) {
  SiteValueMap values;
  values[{WellAddress::Make(0, 0), 0}] = 2.0;
  values[{WellAddress::Make(1, 1), 0}] = 2.0;
  const std::string svg = PlateHeatmapSvg(values, 1, "t");
  EXPECT_NE(svg.find("#bdbdbd"), std::string::npos);
  EXPECT_NE(svg.find(RampHex(0.5)), std::string::npos);
  values[{WellAddress::Make(2, 3), 0}] = std::nan("");
  EXPECT_EQ(CodeOf([&] { PlateHeatmapSvg(values, 1, "t"); }), ErrorCode::kInput);
  SiteValueMap bad_site;
  bad_site[{WellAddress::Make(0, 0), 4}] = 1.0;
  EXPECT_EQ(CodeOf([&] { PlateHeatmapSvg(bad_site, 4, "t"); }), ErrorCode::kInput);
}

TEST(SaliencyTest, BackgroundOcclusionDoesNotChangeCountScore) {
  const SiteImage image = testing::SpotImage(48, 48, 1, {{18, 18}, {30, 42}}, 2.0, 0.9f);
  const SiteScoreFn count = [](const SiteImage& im) {
    return static_cast<double>(SegmentNuclei(im).detections.size());
  };
  const std::vector<float> fill = BackgroundMedian(image);
  ASSERT_EQ(fill.size(), 1u);
  EXPECT_LT(fill[0], 0.01f);
  const SaliencyGrid grid = OcclusionSaliency(count, image, 12, 12, fill);
  ASSERT_EQ(grid.rows, 4);
  ASSERT_EQ(grid.cols, 4);
  // Cells at (x=18, y=18) and (x=30, y=42) sit inside windows (1, 1) and (3, 2).
  for (int i = 0; i < grid.rows; ++i) {
    for (int j = 0; j < grid.cols; ++j) {
      const bool covers_cell = (i == 1 && j == 1) || (i == 3 && j == 2);
      EXPECT_DOUBLE_EQ(grid.at(i, j), covers_cell ? 1.0 : 0.0) << i << "," << j;
    }
  }
  EXPECT_EQ(CodeOf([&] { OcclusionSaliency(count, image, 0, 1, fill); }), ErrorCode::kInput);
  EXPECT_EQ(CodeOf([&] { OcclusionSaliency(count, image, 8, 8, std::vector<float>{0, 0}); }),
            ErrorCode::kInput);
}

}  // namespace
}  // namespace plateaudit::imaging
