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

#include <atomic>
#include <cmath>
#include <cstring>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "plateaudit/core/digest.h"
#include "plateaudit/core/error.h"
#include "plateaudit/core/image.h"
#include "plateaudit/core/io.h"
#include "plateaudit/core/manifest.h"
#include "plateaudit/core/parallel.h"
#include "plateaudit/core/rng.h"
#include "plateaudit/core/types.h"
#include "plateaudit/simulate/simulator.h"
#include "testing/fixtures.h"

namespace plateaudit {
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

TEST(DigestTest, Fnv1aMatchesReferenceVectors) {
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(Fnv1a64("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(HexDigest(0xabcULL), "0000000000000abc");
}

TEST(RngTest, SamePathGivesSameSequence) {
  RngStream a = RngStream::Derive(7, {"a"});
  RngStream b = RngStream::Derive(7, {"a"});
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
}

TEST(RngTest, DifferentLabelsDiffer) {
  EXPECT_NE(RngStream::Derive(7, {"a"}).NextU64(), RngStream::Derive(7, {"b"}).NextU64());
  EXPECT_NE(RngStream::Derive(7, {"a"}).NextU64(), RngStream::Derive(8, {"a"}).NextU64());
  // Label boundaries matter: ("ab") is not ("a", "b").
  EXPECT_NE(RngStream::Derive(7, {"ab"}).NextU64(), RngStream::Derive(7, {"a", "b"}).NextU64());
}

TEST(RngTest, StreamsAreIndependentOfOtherConsumption) {
  const uint64_t fresh = RngStream::Derive(7, {"a", "b"}).NextU64();
  RngStream other = RngStream::Derive(7, {"a"});
  for (int i = 0; i < 1000; ++i) other.NextU64();
  EXPECT_EQ(RngStream::Derive(7, {"a", "b"}).NextU64(), fresh);
  EXPECT_EQ(RngStream::Derive(7, {"a"}).Child("b").NextU64(), fresh);
}

TEST(RngTest, EmptyPathRejected) {
  EXPECT_EQ(CodeOf([] { RngStream::Derive(1, std::span<const std::string>{}); }),
            ErrorCode::kInput);
}

TEST(RngTest, SamplerMomentsMatchTheory) {
  RngStream rng = RngStream::Derive(11, {"moments"});
  constexpr int kN = 200000;
  double su = 0, sn = 0, sn2 = 0, sg = 0, sp = 0, sp2 = 0;
  for (int i = 0; i < kN; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.Normal();
    sn += z;
    sn2 += z * z;
    sg += rng.Gamma(3.0, 2.0);
    const double p = static_cast<double>(rng.Poisson(4.5));
    sp += p;
    sp2 += p * p;
  }
  EXPECT_NEAR(su / kN, 0.5, 0.005);
  EXPECT_NEAR(sn / kN, 0.0, 0.01);
  EXPECT_NEAR(sn2 / kN, 1.0, 0.015);
  EXPECT_NEAR(sg / kN, 6.0, 0.05);
  EXPECT_NEAR(sp / kN, 4.5, 0.03);
  EXPECT_NEAR(sp2 / kN - (sp / kN) * (sp / kN), 4.5, 0.08);
}

TEST(RngTest, LargePoissonMean) {
  RngStream rng = RngStream::Derive(3, {"poisson"});
  double s = 0;
  for (int i = 0; i < 5000; ++i) s += static_cast<double>(rng.Poisson(2000.0));
  EXPECT_NEAR(s / 5000, 2000.0, 2.0);
}

TEST(RngTest, ShuffleIsAPermutation) {
  RngStream rng = RngStream::Derive(5, {"shuffle"});
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  rng.Shuffle(v);
  EXPECT_EQ(std::set<int>(v.begin(), v.end()).size(), 50u);
  std::vector<int> sorted(v);
  std::sort(sorted.begin(), sorted.end());
  EXPECT_NE(v, sorted);
}

TEST(TypesTest, WellGeometry) {
  EXPECT_EQ(WellAddress::Make(0, 0).Label(), "A01");
  EXPECT_EQ(WellAddress::Make(7, 11).Label(), "H12");
  EXPECT_DOUBLE_EQ(WellAddress::Make(0, 0).NormalizedCenterDistance(), 1.0);
  EXPECT_DOUBLE_EQ(WellAddress::Make(7, 11).NormalizedCenterDistance(), 1.0);
  EXPECT_LT(WellAddress::Make(3, 5).NormalizedCenterDistance(), 0.15);
  EXPECT_EQ(CodeOf([] { WellAddress::Make(8, 0); }), ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([] { WellAddress::Make(0, 12); }), ErrorCode::kValidation);
}

TEST(TypesTest, SiteKeyRoundTrip) {
  const SiteKey key{"b1", "b1-p2", WellAddress::Make(3, 7), 2};
  EXPECT_EQ(key.ToString(), "b1/b1-p2/r3c7/s2");
  EXPECT_EQ(SiteKey::Parse(key.ToString()), key);
  EXPECT_THROW(SiteKey::Parse("b1/p/r3c7"), Error);
  EXPECT_THROW(SiteKey::Parse("b1/p/r9c7/s0"), Error);
  EXPECT_THROW(ValidateId("a b", "id"), Error);
  EXPECT_THROW(ValidateId("a,b", "id"), Error);
  EXPECT_THROW(ValidateId("", "id"), Error);
}

TEST(ImageTest, ZeroImageRoundTripsBytes) {
  const SiteImage image(16, 16, 1);
  const std::string bytes = EncodeImage(image);
  EXPECT_EQ(bytes.size(), 5u + 12u + 16u * 16u * 4u);
  EXPECT_EQ(bytes.substr(0, 5), "PTNS1");
  EXPECT_EQ(EncodeImage(DecodeImage(bytes)), bytes);
}

TEST(ImageTest, HeaderIsLittleEndian) {
  const std::string bytes = EncodeImage(SiteImage(16, 20, 3));
  const auto u32 = [&](std::size_t at) {
    return static_cast<uint32_t>(static_cast<unsigned char>(bytes[at])) |
           static_cast<uint32_t>(static_cast<unsigned char>(bytes[at + 1])) << 8 |
           static_cast<uint32_t>(static_cast<unsigned char>(bytes[at + 2])) << 16 |
           static_cast<uint32_t>(static_cast<unsigned char>(bytes[at + 3])) << 24;
  };
  EXPECT_EQ(u32(5), 16u);
  EXPECT_EQ(u32(9), 20u);
  EXPECT_EQ(u32(13), 3u);
}

TEST(ImageTest, RandomImageRoundTripsExactly) {
  RngStream rng = RngStream::Derive(1, {"image"});
  SiteImage image(64, 64, 5);
  for (float& v : image.mutable_data()) v = static_cast<float>(rng.Uniform());
  testing::TempDir dir;
  WriteImage(image, dir / "x.ptns");
  EXPECT_EQ(ReadImage(dir / "x.ptns"), image);
}

TEST(ImageTest, MalformedInputsRaiseTypedErrors) {
  const std::string good = EncodeImage(SiteImage(16, 16, 2));
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_EQ(CodeOf([&] { DecodeImage(bad_magic); }), ErrorCode::kFormat);
  EXPECT_EQ(CodeOf([&] { DecodeImage(good.substr(0, good.size() - 3)); }),
            ErrorCode::kCorruption);
  std::string tiny = good;
  tiny[5] = 4;  // height 4 < 16
  EXPECT_EQ(CodeOf([&] { DecodeImage(tiny); }), ErrorCode::kFormat);
  std::string nan = good;
  const float q = std::nanf("");
  std::memcpy(&nan[17], &q, 4);
  EXPECT_EQ(CodeOf([&] { DecodeImage(nan); }), ErrorCode::kCorruption);
}

TEST(ImageTest, ReadErrorsNameThePath) {
  testing::TempDir dir;
  WriteFile(dir / "bad.ptns", "PTNS1\x10");
  try {
    ReadImage(dir / "bad.ptns");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("bad.ptns"), std::string::npos);
  }
  EXPECT_EQ(CodeOf([&] { ReadImage(dir / "missing.ptns"); }), ErrorCode::kIo);
}

TEST(ImageTest, ConstructorValidates) {
  EXPECT_EQ(CodeOf([] { SiteImage(15, 16, 1); }), ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([] { SiteImage(16, 16, 0); }), ErrorCode::kValidation);
}

ExperimentManifest TinyManifest() {
  ExperimentManifest m;
  m.config_digest = "abc";
  m.cell_lines.push_back({"H1", "s1", Condition::kHealthy, "wt", LabSource::kA});
  m.cell_lines.push_back({"D1", "s2", Condition::kDisease, "sma1", LabSource::kB});
  m.sites.push_back({{"b0", "p0", WellAddress::Make(0, 0), 0}, "H1", "i/0.ptns", true});
  m.sites.push_back({{"b0", "p0", WellAddress::Make(0, 1), 0}, "D1", "i/1.ptns", false});
  return m;
}

TEST(ManifestTest, RoundTripPreservesFields) {
  const ExperimentManifest m = TinyManifest();
  EXPECT_EQ(ManifestFromJsonl(ManifestToJsonl(m)), m);
  ExperimentManifest empty;
  empty.config_digest = "x";
  EXPECT_EQ(ManifestFromJsonl(ManifestToJsonl(empty)).sites.size(), 0u);
}

TEST(ManifestTest, SimulatedManifestRoundTrips) {
  const auto plan = simulate::PlanExperiment(simulate::DefaultSimConfig());
  ASSERT_EQ(plan.manifest.sites.size(), 2304u);
  testing::TempDir dir;
  SaveManifest(plan.manifest, dir / "m.jsonl");
  EXPECT_EQ(LoadManifest(dir / "m.jsonl"), plan.manifest);
}

TEST(ManifestTest, UnknownKeyIsNamed) {
  std::string text = ManifestToJsonl(TinyManifest());
  const std::size_t pos = text.find("\"site\"");
  text.insert(pos, "\"colour\":1,");
  try {
    ManifestFromJsonl(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFormat);
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
}

TEST(ManifestTest, DanglingLineNamesLineAndSite) {
  ExperimentManifest m = TinyManifest();
  m.sites[1].cell_line = "X";
  try {
    m.Validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
    EXPECT_NE(std::string(e.what()).find("X"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("b0/p0/r0c1/s0"), std::string::npos);
  }
  EXPECT_THROW(ManifestFromJsonl(ManifestToJsonl(m)), Error);
}

TEST(ManifestTest, DuplicateKeysRejected) {
  ExperimentManifest m = TinyManifest();
  m.sites[1].key = m.sites[0].key;
  EXPECT_EQ(CodeOf([&] { m.Validate(); }), ErrorCode::kValidation);
}

TEST(ParallelTest, CoversEveryIndexOnce) {
  for (const int threads : {1, 3, 8}) {
    std::vector<std::atomic<int>> hits(97);
    ParallelFor(hits.size(), threads, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ParallelTest, RethrowsLowestIndexFailure) {
  for (const int threads : {1, 4}) {
    try {
      ParallelFor(20, threads, [](std::size_t i) {
        if (i == 5 || i == 11) throw std::runtime_error("fail " + std::to_string(i));
      });
      FAIL();
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "fail 5");
    }
  }
}

TEST(IoTest, Formatting) {
  EXPECT_EQ(FormatFixed(-0.00001, 4), "0.0000");
  EXPECT_EQ(FormatFixed(1.23456, 2), "1.23");
  EXPECT_EQ(FormatSignificant(0.1, 9), "0.1");
  EXPECT_FALSE(ParseDouble("1.5x").has_value());
  EXPECT_FALSE(ParseDouble("nan").has_value());
  EXPECT_DOUBLE_EQ(*ParseDouble("-2.5e-3"), -2.5e-3);
  EXPECT_EQ(SplitCsvLine("a,,b").size(), 3u);
  EXPECT_EQ(SplitLines("a\r\nb\n").size(), 2u);
}

}  // namespace
}  // namespace plateaudit
