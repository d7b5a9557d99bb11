// Copyright 2026 The finimg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <numeric>

#include "finimg/schema.hpp"
#include "test_util.hpp"

using finimg::DatasetKind;
using finimg::Errc;
using finimg::Feature;
using finimg::FeatureSchema;

TEST(Schema, CanonicalFundamentalCounts) {
  const auto s = FeatureSchema::canonical_fundamental();
  EXPECT_EQ(s.size(), 332u);
  EXPECT_EQ(s.kind(), DatasetKind::fundamental);
  EXPECT_EQ(s.section_counts(), (std::vector<std::size_t>{78, 45, 75, 33, 49, 52}));
  ASSERT_EQ(s.sections().size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(s.sections()[i], finimg::fundamental_sections()[i]);
}

TEST(Schema, CanonicalRatioCounts) {
  const auto s = FeatureSchema::canonical_ratio();
  EXPECT_EQ(s.size(), 69u);
  EXPECT_EQ(s.section_counts(), (std::vector<std::size_t>{13, 15, 4, 16, 6, 4, 7, 4}));
  EXPECT_EQ(s.sections().size(), 8u);
}

TEST(Schema, MembersPartitionFeatures) {
  const auto s = FeatureSchema::canonical_fundamental();
  std::vector<int> all;
  for (const auto& m : s.section_members()) all.insert(all.end(), m.begin(), m.end());
  std::sort(all.begin(), all.end());
  std::vector<int> expected(332);
  std::iota(expected.begin(), expected.end(), 0);
  EXPECT_EQ(all, expected);
}

TEST(Schema, RejectsDuplicatesAndForeignLabels) {
  EXPECT_ERRC(FeatureSchema({{"a", "x"}, {"a", "y"}}, DatasetKind::generic), Errc::validation);
  EXPECT_ERRC(FeatureSchema({{"a", "Liquidity"}}, DatasetKind::fundamental), Errc::validation);
  EXPECT_ERRC(FeatureSchema({{"a", "Special Items"}}, DatasetKind::ratio), Errc::validation);
}

TEST(Schema, InferKind) {
  EXPECT_EQ(FeatureSchema::infer({{"a", "Special Items"}, {"b", "Balance Sheet Data"}}).kind(), DatasetKind::fundamental);
  EXPECT_EQ(FeatureSchema::infer({{"a", "Liquidity"}}).kind(), DatasetKind::ratio);
  EXPECT_EQ(FeatureSchema::infer({{"a", "Liquidity"}, {"b", "Special Items"}}).kind(), DatasetKind::generic);
}

TEST(Schema, SectionOrderIsCanonicalNotAppearance) {
  const FeatureSchema s({{"z", "Special Items"}, {"y", "Balance Sheet Data"}}, DatasetKind::fundamental);
  EXPECT_EQ(s.sections(), (std::vector<std::string>{"Balance Sheet Data", "Special Items"}));
  EXPECT_EQ(s.section_members()[0], std::vector<int>{1});
}

TEST(Schema, CsvRoundTrip) {
  const auto dir = test_util::scratch_dir();
  const auto s = FeatureSchema::canonical_ratio();
  s.save_csv(dir / "schema.csv");
  EXPECT_EQ(FeatureSchema::load_csv(dir / "schema.csv"), s);
}

TEST(Schema, LoadRejectsBadHeader) {
  const auto dir = test_util::scratch_dir();
  test_util::write_text(dir / "bad.csv", "feature,group\na,b\n");
  EXPECT_ERRC(FeatureSchema::load_csv(dir / "bad.csv"), Errc::parse);
  EXPECT_ERRC(FeatureSchema::load_csv(dir / "missing.csv"), Errc::io);
}

TEST(Schema, Subset) {
  const auto s = FeatureSchema::canonical_ratio();
  const std::vector<int> keep{0, 13, 68};
  const auto sub = s.subset(keep);
  ASSERT_EQ(sub.size(), 3u);
  EXPECT_EQ(sub[1], s[13]);
  EXPECT_EQ(sub.kind(), DatasetKind::ratio);
}
