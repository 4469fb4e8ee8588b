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

#include <cmath>
#include <random>

#include "csauc/metrics.hpp"
#include "csauc/oracle.hpp"
#include "fixtures.hpp"
#include "gtest/gtest.h"

namespace csauc {
namespace {

using testing::demo_samples;

TEST(Metrics, RankAucExamples) {
  EXPECT_EQ(auc_rank(demo_samples(4)), 0.75);
  EXPECT_EQ(auc_rank(demo_samples(5)), 0.5);
  std::vector<Sample> constant{{1, 1, 0.4, {}}, {0, 2, 0.4, {}}, {0, 1, 0.4, {}}};
  EXPECT_EQ(auc_rank(constant), 0.5);
  std::vector<Sample> reversed{{1, 1, 0.1, {}}, {0, 2, 0.9, {}}};
  EXPECT_EQ(auc_rank(reversed), 0.0);
}

TEST(Metrics, RankAucMatchesPairwise) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 300; ++round) {
    auto samples = testing::random_dataset(rng, {.tie_heavy = round % 2 == 0});
    try {
      const auto expected = oracle::auc_pairwise_parts(samples);
      const auto got = auc_rank_parts(samples);
      EXPECT_EQ(got.concordant, expected.concordant);
      EXPECT_EQ(got.pairs, expected.pairs);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NoPosNegPairs);
      EXPECT_THROW(auc_rank(samples), Error);
    }
  }
}

TEST(Metrics, RankAucInvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(22);
  for (int round = 0; round < 50; ++round) {
    auto samples = testing::random_dataset(rng);
    double base = 0;
    try {
      base = auc_rank(samples);
    } catch (const Error&) {
      continue;
    }
    auto squared = samples;
    for (auto& s : squared) s.pctr = s.pctr * s.pctr;
    EXPECT_EQ(auc_rank(squared), base);
  }
}

TEST(Metrics, Copc) {
  std::vector<Sample> samples{{1, 1, 0.5, {}}, {0, 1, 0.25, {}}, {1, 1, 0.25, {}}};
  EXPECT_EQ(copc(samples), 2.0);
  EXPECT_EQ(copc(std::vector<Sample>{{1, 1, 1.0, {}}}), 1.0);
  EXPECT_EQ(copc(std::vector<Sample>{{0, 1, 0.3, {}}, {0, 2, 0.6, {}}}), 0.0);
}

TEST(Metrics, RoprOnWorkedExample) {
  // clicked revenue 100 + 4 + 3 + 2 = 109 over predicted 0.009*100 + ... for seq1
  const auto samples = demo_samples(0);
  double predicted = 0;
  for (const auto& s : samples) predicted += s.pctr * s.bid;
  EXPECT_NEAR(ropr(samples), 109.0 / predicted, 1e-14);
  std::vector<Sample> pair{{1, 100, 0.5, {}}, {0, 999, 0.4, {}}};
  EXPECT_NEAR(ropr(pair), 100.0 / 449.6, 1e-15);
  EXPECT_NEAR(ropr(pair), 0.2224, 5e-5);
  std::vector<Sample> unclicked{{0, 100, 0.5, {}}, {0, 999, 0.4, {}}};
  EXPECT_EQ(ropr(unclicked), 0.0);
}

TEST(Metrics, CalibrationErrors) {
  std::vector<Sample> zero{{1, 1, 0.0, {}}, {0, 2, 0.0, {}}};
  try {
    copc(zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroPredictedClicks);
  }
  try {
    ropr(zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroPredictedRevenue);
  }
}

TEST(Metrics, UniformBidRoprEqualsCopc) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> bid_dist(0.01, 1000.0);
  for (int round = 0; round < 200; ++round) {
    const double bid = bid_dist(rng);
    std::vector<Sample> samples;
    for (int i = 0; i < 500; ++i) samples.push_back({unit(rng) < 0.3 ? 1 : 0, bid, unit(rng), {}});
    EXPECT_NEAR(ropr(samples), copc(samples), 1e-15);
  }
}

TEST(Metrics, PctrScalingScalesCalibrationInversely) {
  std::mt19937_64 rng(24);
  auto samples = testing::random_dataset(rng);
  samples.push_back({1, 3, 0.5, {}});
  for (double lambda : {0.1, 0.5, 0.9}) {
    auto scaled = samples;
    for (auto& s : scaled) s.pctr *= lambda;
    EXPECT_NEAR(copc(scaled), copc(samples) / lambda, 1e-12 * copc(samples) / lambda);
    EXPECT_NEAR(ropr(scaled), ropr(samples) / lambda, 1e-12 * ropr(samples) / lambda);
  }
}

}  // namespace
}  // namespace csauc
