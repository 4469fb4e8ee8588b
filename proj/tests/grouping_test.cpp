// Copyright 2026 The csauc Authors
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

#include <random>

#include "csauc/grouping.hpp"
#include "csauc/oracle.hpp"
#include "fixtures.hpp"
#include "gtest/gtest.h"

namespace csauc {
namespace {

using testing::demo_samples;

std::vector<Sample> concat(std::vector<Sample> a, const std::vector<Sample>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

ErrorCode error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::InvalidArgument;
}

TEST(Grouping, PooledRewardAcrossTwoGroups) {
  const auto samples = concat(demo_samples(0, "a"), demo_samples(1, "b"));
  auto r = gcsauc(samples);
  EXPECT_NEAR(r.value, 545.0 / 840.0, 1e-12);
  EXPECT_EQ(r.n_groups, 2u);
  EXPECT_EQ(r.skipped_groups, 0u);
  EXPECT_EQ(r.attainable, 840.0);
  ASSERT_EQ(r.per_group.size(), 2u);
  EXPECT_EQ(r.per_group[0].key, "a");
  EXPECT_NEAR(*r.per_group[0].value, 125.0 / 420.0, 1e-15);
  EXPECT_EQ(*r.per_group[1].value, 1.0);
  EXPECT_NEAR(oracle::gcsauc_exact(samples).value, 545.0 / 840.0, 1e-12);

  GroupPolicy uniform{GroupWeight::Uniform, 2};
  EXPECT_NEAR(gcsauc(samples, uniform).value, 0.5 * (125.0 / 420.0 + 1.0), 1e-12);
}

TEST(Grouping, SingleGroupEqualsUngroupedExactly) {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 50; ++round) {
    auto samples = testing::random_dataset(rng);
    for (auto& s : samples) s.group_key = "only";
    try {
      const double plain = csauc(samples).csauc;
      for (auto w : {GroupWeight::RewardMax, GroupWeight::ImpressionCount, GroupWeight::Uniform})
        EXPECT_EQ(gcsauc(samples, {w, 2}).value, plain);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NoRankedPairs);
    }
    try {
      const double plain = auc_rank(samples);
      EXPECT_EQ(gauc(samples).value, plain);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NoPosNegPairs);
    }
  }
}

TEST(Grouping, SkipsSmallAndUnrankableGroups) {
  auto samples = concat(demo_samples(0, "a"), std::vector<Sample>{{1, 5, 0.3, "tiny"}});
  samples.push_back({0, 5, 0.3, "negatives"});
  samples.push_back({0, 2, 0.1, "negatives"});
  auto r = gcsauc(samples);
  EXPECT_EQ(r.n_groups, 3u);
  EXPECT_EQ(r.skipped_groups, 2u);
  EXPECT_EQ(r.value, 125.0 / 420.0);
}

TEST(Grouping, Errors) {
  std::vector<Sample> negatives{{0, 1, 0.1, "a"}, {0, 1, 0.2, "a"}, {0, 1, 0.3, "b"}, {0, 2, 0.3, "b"}};
  EXPECT_EQ(error_of([&] { gcsauc(negatives); }), ErrorCode::AllGroupsSkipped);
  EXPECT_EQ(error_of([&] { gauc(negatives); }), ErrorCode::AllGroupsSkipped);
  auto missing = demo_samples(0, "a");
  missing[2].group_key.reset();
  EXPECT_EQ(error_of([&] { gcsauc(missing); }), ErrorCode::MissingGroupKey);
  EXPECT_EQ(error_of([&] { gauc(std::vector<Sample>{}); }), ErrorCode::NoSamples);
  EXPECT_EQ(parse_group_weight("count"), GroupWeight::ImpressionCount);
  EXPECT_EQ(error_of([] { parse_group_weight("median"); }), ErrorCode::InvalidArgument);
}

TEST(Grouping, GroupedAuc) {
  const auto samples = concat(demo_samples(4, "a"), demo_samples(5, "b"));
  EXPECT_EQ(gauc(samples, {GroupWeight::Uniform, 2}).value, 0.625);
  // both groups have four positive-negative pairs, so the pooled value agrees
  EXPECT_EQ(gauc(samples).value, 0.625);
  EXPECT_EQ(oracle::gauc_pairwise(samples, {GroupWeight::Uniform, 2}).value, 0.625);
  auto weighted = concat(demo_samples(4, "a"), demo_samples(5, "b"));
  weighted.push_back({0, 1, 0.0, "b"});
  auto count = gauc(weighted, {GroupWeight::ImpressionCount, 2});
  // group b: 4 positives, 2 negatives, 6 of 8 pairs concordant
  EXPECT_NEAR(count.value, (5 * 0.75 + 6 * 0.75) / 11, 1e-15);
}

// pctr on a coarse grid with integer bids keeps distinct pCPM values in
// distinct buckets, so the bucketed result equals the exact one.
TEST(Grouping, MatchesOracleOnRandomGroups) {
  std::mt19937_64 rng(32);
  for (int round = 0; round < 100; ++round) {
    auto samples = testing::random_dataset(rng, {.max_n = 150, .tie_heavy = true, .with_groups = true, .groups = 5});
    for (auto w : {GroupWeight::RewardMax, GroupWeight::ImpressionCount, GroupWeight::Uniform}) {
      GroupPolicy policy{w, 2};
      try {
        const auto expected = oracle::gcsauc_exact(samples, policy);
        const auto got = gcsauc(samples, policy);
        EXPECT_NEAR(got.value, expected.value, 1e-9);
        EXPECT_EQ(got.skipped_groups, expected.skipped_groups);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AllGroupsSkipped);
      }
      try {
        EXPECT_NEAR(gauc(samples, policy).value, oracle::gauc_pairwise(samples, policy).value, 1e-12);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AllGroupsSkipped);
      }
    }
  }
}

TEST(Grouping, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(33);
  auto samples = testing::random_dataset(rng, {.max_n = 300, .with_groups = true, .groups = 16});
  samples.push_back({1, 2, 0.9, "g0"});
  samples.push_back({0, 2, 0.1, "g0"});
  const auto one = gcsauc(samples, {}, TiePolicy::HalfCredit, {}, 1);
  const auto four = gcsauc(samples, {}, TiePolicy::HalfCredit, {}, 4);
  EXPECT_EQ(one.value, four.value);
  ASSERT_EQ(one.per_group.size(), four.per_group.size());
  for (std::size_t i = 0; i < one.per_group.size(); ++i) {
    EXPECT_EQ(one.per_group[i].key, four.per_group[i].key);
    EXPECT_EQ(one.per_group[i].value, four.per_group[i].value);
  }
}

}  // namespace
}  // namespace csauc
