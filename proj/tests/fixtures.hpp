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

// Shared test data: the five-ad worked example and seeded random datasets.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "csauc/model.hpp"

namespace csauc::testing {

// Ads A..D are clicked with bids 100, 4, 3, 2; E is unclicked with bid 999.
inline constexpr std::array<double, 5> kDemoBids{100, 4, 3, 2, 999};
inline constexpr std::array<int, 5> kDemoLabels{1, 1, 1, 1, 0};

// pCTRs for A..E realizing each pCPM ordering below. They are also chosen so
// that E's pCTR rank matches its pCPM rank, which fixes the plain AUC.
//   seq1: D > C > B > A > E      seq4: A > B > D > C > E
//   seq2: A > B > C > D > E      seq5: B > C > D > E > A
//   seq3: A > C > B > D > E      seq6: A > B > E > C > D
inline constexpr std::array<std::array<double, 5>, 6> kDemoPctr{{
    {0.009, 0.3, 0.5, 0.9, 1e-4},
    {0.5, 0.9, 0.9, 0.9, 1e-6},
    {0.5, 0.6, 0.9, 0.9, 1e-6},
    {0.5, 0.9, 0.5, 0.9, 1e-6},
    {0.0005, 0.9, 0.8, 0.7, 0.001001},
    {0.5, 0.9, 0.001, 0.0005, 0.002},
}};

// Captured revenue out of the attainable 420 for seq1..seq6, from summing
// the pair payments by hand (E never pays, a reversed positive pair pays the
// lower bid).
inline constexpr std::array<double, 6> kDemoRewardRank{125, 420, 419, 419, 29, 415};
inline constexpr double kDemoRewardMax = 420;

// Rounded csAUC values of the published worked example.
inline constexpr std::array<double, 6> kPublishedCsauc{0.2976, 1, 0.9976, 0.9976, 0.069, 0.988};

inline std::vector<Sample> demo_samples(std::size_t seq, std::optional<std::string> group = std::nullopt) {
  std::vector<Sample> out;
  for (std::size_t i = 0; i < 5; ++i)
    out.push_back(Sample{kDemoLabels[i], kDemoBids[i], kDemoPctr[seq][i], group});
  return out;
}

struct RandomDatasetConfig {
  std::size_t max_n = 300;
  std::size_t max_distinct_bids = 8;
  std::uint32_t max_bid = 20;
  bool tie_heavy = false;  // draw pctr from a handful of values
  bool with_groups = false;
  std::size_t groups = 4;
};

/// n in [2, max_n], integer bids from a random set of at most
/// max_distinct_bids values, labels ~ Bernoulli(p) with p random per dataset.
inline std::vector<Sample> random_dataset(std::mt19937_64& rng, const RandomDatasetConfig& cfg = {}) {
  std::uniform_int_distribution<std::size_t> n_dist(2, cfg.max_n);
  std::uniform_int_distribution<std::size_t> k_dist(1, cfg.max_distinct_bids);
  std::uniform_int_distribution<std::uint32_t> bid_dist(1, cfg.max_bid);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = n_dist(rng);
  std::vector<double> bid_set(k_dist(rng));
  for (auto& b : bid_set) b = bid_dist(rng);
  const double p_click = 0.1 + 0.8 * unit(rng);
  std::uniform_int_distribution<std::size_t> pick(0, bid_set.size() - 1);
  std::uniform_int_distribution<int> tie_pick(1, 6);
  std::uniform_int_distribution<std::size_t> group_pick(0, cfg.groups - 1);
  std::vector<Sample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Sample s;
    s.label = unit(rng) < p_click ? 1 : 0;
    s.bid = bid_set[pick(rng)];
    s.pctr = cfg.tie_heavy ? tie_pick(rng) / 8.0 : unit(rng);
    if (cfg.with_groups) s.group_key = "g" + std::to_string(group_pick(rng));
    out.push_back(s);
  }
  return out;
}

}  // namespace csauc::testing
