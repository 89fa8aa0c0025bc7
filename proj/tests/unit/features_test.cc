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
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "plateaudit/core/error.h"
#include "plateaudit/core/rng.h"
#include "plateaudit/features/features.h"
#include "plateaudit/features/table.h"
#include "plateaudit/imaging/filters.h"
#include "plateaudit/imaging/segment.h"
#include "plateaudit/learn/metrics.h"
#include "plateaudit/simulate/simulator.h"
#include "testing/fixtures.h"

namespace plateaudit::features {
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

SiteImage SimulatedSite(std::size_t index = 5) {
  const simulate::ExperimentPlan plan = simulate::PlanExperiment(testing::SmallConfig(21));
  return simulate::RenderSite(plan, index);
}

std::vector<double> Extract(const SiteImage& image) {
  const auto seg = imaging::SegmentNuclei(image);
  return ExtractFeatures(image, seg.detections);
}

TEST(FeaturesTest, NamesAndDescriptions) {
  ASSERT_EQ(FeatureNames().size(), 63u);
  EXPECT_EQ(FeatureNames().front(), "f000");
  EXPECT_EQ(FeatureNames().back(), "f062");
  ASSERT_EQ(FeatureDescriptions().size(), 63u);
  EXPECT_EQ(FeatureDescriptions()[kCellCountFeature], "cell_count");
  EXPECT_EQ(std::set<std::string>(FeatureDescriptions().begin(), FeatureDescriptions().end())
                .size(),
            63u);
}

TEST(FeaturesTest, ZeroImageGivesFiniteFeatures) {
  const std::vector<double> f = Extract(testing::ConstantImage(32, 32, 5, 0.0f));
  ASSERT_EQ(f.size(), 63u);
  for (const double v : f) EXPECT_TRUE(std::isfinite(v));
  EXPECT_EQ(f[kCellCountFeature], 0.0);
  EXPECT_EQ(f[6], 0.0);
}

TEST(FeaturesTest, CountsWellSeparatedCells) {
  std::vector<std::pair<double, double>> centers;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) centers.emplace_back(8.0 + 12.0 * j, 8.0 + 12.0 * i);
  }
  const std::vector<double> f = Extract(testing::SpotImage(64, 64, 5, centers, 1.8, 0.9f));
  EXPECT_EQ(f[kCellCountFeature], 25.0);
  EXPECT_EQ(CellDensity({}), 0);
}

TEST(FeaturesTest, RejectsWrongChannelCount) {
  EXPECT_EQ(CodeOf([] { ExtractFeatures(testing::ConstantImage(32, 32, 3, 0.1f), {}); }),
            ErrorCode::kSchema);
}

// Independent recomputation of a few per-channel statistics.
struct ChannelOracle {
  double total = 0, fg_mean = 0, p75 = 0, saturated = 0, area = 0;
};

ChannelOracle RecomputeChannel(const SiteImage& image, int c) {
  const std::vector<float> plane = image.Channel(c);
  const imaging::OtsuResult otsu = imaging::OtsuThreshold(plane);
  ChannelOracle o;
  double fg_sum = 0;
  int fg = 0;
  for (const float v : plane) {
    o.total += v;
    if (v >= 0.99f) o.saturated += 1;
    if (!otsu.degenerate && v > otsu.threshold) {
      fg_sum += v;
      ++fg;
    }
  }
  o.saturated /= plane.size();
  o.area = static_cast<double>(fg) / plane.size();
  o.fg_mean = fg > 0 ? fg_sum / fg : 0.0;
  std::vector<double> sorted(plane.begin(), plane.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = 0.75 * (sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  o.p75 = sorted[lo] + (pos - lo) * (sorted[std::min(lo + 1, sorted.size() - 1)] - sorted[lo]);
  return o;
}

TEST(FeaturesTest, MatchesRecomputationOracle) {
  const SiteImage image = SimulatedSite();
  const std::vector<double> f = Extract(image);
  for (int c = 0; c < kFeatureChannels; ++c) {
    const ChannelOracle o = RecomputeChannel(image, c);
    const int base = c * kPerChannelFeatures;
    EXPECT_NEAR(f[base + 0], o.area, 1e-12);
    EXPECT_NEAR(f[base + 1], o.fg_mean, 1e-6);
    EXPECT_NEAR(f[base + 6], o.total, 1e-6 * o.total);
    EXPECT_NEAR(f[base + 7], o.p75, 1e-7);
    EXPECT_NEAR(f[base + 8], o.saturated, 1e-12);
  }
  const auto detections = imaging::SegmentNuclei(image).detections;
  EXPECT_EQ(f[kCellCountFeature], static_cast<double>(detections.size()));
  double area = 0;
  for (const auto& d : detections) area += d.area_px;
  EXPECT_NEAR(f[kMeanAreaFeature], area / detections.size(), 1e-9);
}

TEST(FeaturesTest, IntensityScalingProperties) {
  const SiteImage image = SimulatedSite();
  const auto detections = imaging::SegmentNuclei(image).detections;
  const std::vector<double> base = ExtractFeatures(image, detections);
  for (const float g : {0.5f, 0.8f}) {
    SiteImage scaled = image;
    for (float& v : scaled.mutable_data()) v *= g;
    const std::vector<double> f = ExtractFeatures(scaled, detections);
    for (int c = 0; c < kFeatureChannels; ++c) {
      const int b = c * kPerChannelFeatures;
      // Otsu masks are invariant to scaling, so area is unchanged, first
      // moments scale by g and second moments by g squared.
      EXPECT_NEAR(f[b + 0], base[b + 0], 1e-9);
      EXPECT_NEAR(f[b + 1], g * base[b + 1], 1e-5);
      EXPECT_NEAR(f[b + 5], g * base[b + 5], 1e-5);
      EXPECT_NEAR(f[b + 6], g * base[b + 6], 1e-5 * base[b + 6]);
      EXPECT_NEAR(f[b + 9], g * g * base[b + 9], 1e-5 * base[b + 9] + 1e-12);
      EXPECT_NEAR(f[b + 11], g * g * base[b + 11], 1e-5 * base[b + 11] + 1e-12);
    }
  }
}

TEST(FeaturesTest, InvariantToDetectionOrderAndMirroring) {
  const SiteImage image = SimulatedSite(9);
  auto detections = imaging::SegmentNuclei(image).detections;
  ASSERT_GT(detections.size(), 3u);
  const std::vector<double> base = ExtractFeatures(image, detections);
  std::reverse(detections.begin(), detections.end());
  std::rotate(detections.begin(), detections.begin() + 2, detections.end());
  EXPECT_EQ(ExtractFeatures(image, detections), base);

  SiteImage mirrored(image.height(), image.width(), image.channels());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < image.channels(); ++c) {
        mirrored.at(y, image.width() - 1 - x, c) = image.at(y, x, c);
      }
    }
  }
  const std::vector<double> flipped = ExtractFeatures(mirrored, detections);
  for (int k = 0; k < kFeatureCount; ++k) {
    EXPECT_NEAR(flipped[k], base[k], 1e-9 * (1.0 + std::abs(base[k]))) << k;
  }
}

FeatureTable SmallTable() {
  simulate::SimConfig config = testing::SmallConfig(3);
  config.batches = 1;
  return testing::SimulateTable(config);
}

TEST(TableTest, CsvRoundTrip) {
  const FeatureTable table = SmallTable();
  ASSERT_EQ(table.size(), 96);
  const std::string csv = FeatureTableToCsv(table);
  EXPECT_EQ(csv.rfind("key,batch,plate,row,col,site,cell_line,condition,lab_source,is_control,f000,", 0),
            0u);
  const FeatureTable loaded = FeatureTableFromCsv(csv);
  ASSERT_EQ(loaded.size(), table.size());
  EXPECT_EQ(loaded.feature_names, table.feature_names);
  for (int i = 0; i < table.size(); ++i) {
    EXPECT_EQ(loaded.rows[i].key, table.rows[i].key);
    EXPECT_EQ(loaded.rows[i].meta, table.rows[i].meta);
    for (int j = 0; j < table.width(); ++j) {
      // Nine significant digits bound the relative error by 5e-9.
      const double v = table.rows[i].values[j];
      EXPECT_NEAR(loaded.rows[i].values[j], v, 5e-9 * std::max(1.0, std::abs(v)));
    }
  }
  // Once values carry nine digits the round trip is exact.
  EXPECT_EQ(FeatureTableToCsv(loaded), csv);
  const FeatureTable again = FeatureTableFromCsv(FeatureTableToCsv(loaded));
  for (int i = 0; i < table.size(); ++i) {
    for (int j = 0; j < table.width(); ++j) {
      EXPECT_NEAR(again.rows[i].values[j], loaded.rows[i].values[j], 1e-9);
    }
  }
}

TEST(TableTest, ParseErrorsNameLineAndColumn) {
  std::string csv = FeatureTableToCsv(SmallTable());
  const std::size_t second_line = csv.find('\n') + 1;
  const std::size_t third_line = csv.find('\n', second_line) + 1;
  const std::size_t last_comma = csv.rfind(',', third_line - 2);
  csv.replace(last_comma + 1, third_line - 2 - last_comma, "abc");
  try {
    FeatureTableFromCsv(csv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("f062"), std::string::npos) << e.what();
  }
  EXPECT_EQ(CodeOf([] { FeatureTableFromCsv("nope\n"); }), ErrorCode::kParse);
}

TEST(TableTest, ValidationAndLookup) {
  FeatureTable table = SmallTable();
  EXPECT_EQ(table.FeatureIndex("f010"), 10);
  EXPECT_EQ(CodeOf([&] { table.FeatureIndex("f999"); }), ErrorCode::kSchema);
  EXPECT_EQ(MetaValue(table.rows[0].meta, "batch"), "b0");
  EXPECT_EQ(CodeOf([&] { MetaValue(table.rows[0].meta, "colour"); }), ErrorCode::kInput);
  table.rows[1].key = table.rows[0].key;
  EXPECT_EQ(CodeOf([&] { table.Validate(); }), ErrorCode::kValidation);
  table = SmallTable();
  table.rows[3].values[2] = std::nan("");
  EXPECT_EQ(CodeOf([&] { table.Validate(); }), ErrorCode::kValidation);
  table = SmallTable();
  table.rows[3].values.pop_back();
  EXPECT_EQ(CodeOf([&] { table.Validate(); }), ErrorCode::kValidation);
}

TEST(TableTest, PatchUnitEmitsOneRowPerDetection) {
  simulate::SimConfig config = testing::SmallConfig(8);
  config.batches = 1;
  const simulate::ExperimentPlan plan = simulate::PlanExperiment(config);
  FeaturizeOptions options;
  options.unit = FeatureUnit::kPatch;
  options.threads = 3;
  const auto load = [&](std::size_t i) { return simulate::RenderSite(plan, i); };
  const FeatureTable patches = Featurize(plan.manifest, load, options);
  std::size_t expected = 0;
  for (std::size_t i = 0; i < plan.manifest.sites.size(); ++i) {
    expected += imaging::SegmentNuclei(load(i)).detections.size();
  }
  EXPECT_EQ(static_cast<std::size_t>(patches.size()), expected);
  EXPECT_NE(patches.rows[0].key.find('#'), std::string::npos);
  options.threads = 1;
  EXPECT_EQ(FeatureTableToCsv(Featurize(plan.manifest, load, options)),
            FeatureTableToCsv(patches));
  EXPECT_EQ(CodeOf([] { ParseFeatureUnit("cell"); }), ErrorCode::kInput);
}

TEST(EmbeddingsTest, JoinsAgainstManifest) {
  const simulate::ExperimentPlan plan = simulate::PlanExperiment(testing::SmallConfig());
  std::string csv = "key,e0,e1,e2,e3,e4,e5,e6,e7\n";
  for (int i = 2; i >= 0; --i) {
    csv += plan.manifest.sites[i].key.ToString();
    for (int j = 0; j < 8; ++j) csv += "," + std::to_string(i * 10 + j) + ".5";
    csv += "\n";
  }
  const FeatureTable table = ImportExternalEmbeddings(csv, plan.manifest);
  ASSERT_EQ(table.size(), 3);
  EXPECT_EQ(table.width(), 8);
  EXPECT_EQ(table.rows[0].key, plan.manifest.sites[0].key.ToString());
  EXPECT_DOUBLE_EQ(table.rows[1].values[7], 17.5);
  EXPECT_EQ(table.rows[2].meta.cell_line, plan.manifest.sites[2].cell_line);

  const std::string unmatched = csv + "b9__p0__A01__s0,1,2,3,4,5,6,7,8\n";
  try {
    ImportExternalEmbeddings(unmatched, plan.manifest);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kJoin);
    EXPECT_NE(std::string(e.what()).find("1 embedding keys"), std::string::npos);
  }
  EXPECT_EQ(CodeOf([&] { ImportExternalEmbeddings(csv + "x,1\n", plan.manifest); }),
            ErrorCode::kParse);
  EXPECT_EQ(CodeOf([&] { ImportExternalEmbeddings("id,a\n", plan.manifest); }),
            ErrorCode::kParse);
}

TEST(FeaturesTest, NullExperimentFeaturesDoNotSeparateCondition) {
  const FeatureTable table =
      testing::SimulateTable(simulate::DefaultSimConfig(), 4).Filter([](const FeatureRow& r) {
        return !r.meta.is_control;
      });
  std::vector<int> labels;
  for (const auto& r : table.rows) labels.push_back(r.meta.condition == "disease" ? 1 : 0);
  ASSERT_GE(std::count(labels.begin(), labels.end(), 1), 500);
  ASSERT_GE(std::count(labels.begin(), labels.end(), 0), 500);
  for (int j = 0; j < table.width(); ++j) {
    std::vector<double> column;
    for (const auto& r : table.rows) column.push_back(r.values[j]);
    if (std::all_of(column.begin(), column.end(), [&](double v) { return v == column[0]; })) {
      continue;
    }
    const double auc = learn::RocAuc(column, labels);
    EXPECT_GE(auc, 0.45) << table.feature_names[j];
    EXPECT_LE(auc, 0.55) << table.feature_names[j];
  }
}

}  // namespace
}  // namespace plateaudit::features
