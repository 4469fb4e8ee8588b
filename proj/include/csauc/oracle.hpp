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

// Quadratic reference implementations. They enumerate every pair directly
// and share nothing with the bucketed DP beyond the input types, which makes
// them the ground truth for tests and for the `oracle` CLI mode.

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "csauc/bucketing.hpp"
#include "csauc/csauc_dp.hpp"
#include "csauc/metrics.hpp"
#include "csauc/model.hpp"

namespace csauc::oracle {

inline constexpr std::size_t kDefaultCap = 20000;

namespace detail {

// Payment for one strict-level pair, high member first. `order` is the sign
// of (score_high - score_low).
inline double pay(int order, double bid_high, double t_low, TiePolicy tie) noexcept {
  if (order > 0) return bid_high;
  if (order < 0) return t_low;
  return tie == TiePolicy::FullCredit ? bid_high : 0.5 * (bid_high + t_low);
}

template <class T>
int compare(T a, T b) noexcept {
  return (a > b) - (a < b);
}

}  // namespace detail

/// Definition-level csAUC: levels are the distinct positive bids (negatives
/// below all of them), pairs compare exact pCPM values.
inline RewardResult csauc_exact(std::span<const Sample> samples,
                                TiePolicy tie = TiePolicy::HalfCredit) {
  std::vector<double> bids;
  for (const auto& s : samples)
    if (s.positive()) bids.push_back(s.bid);
  std::sort(bids.begin(), bids.end());
  bids.erase(std::unique(bids.begin(), bids.end()), bids.end());

  const std::size_t n = samples.size();
  std::vector<std::size_t> level(n);
  std::vector<double> score(n);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = samples[i];
    level[i] = s.positive()
                   ? static_cast<std::size_t>(std::lower_bound(bids.begin(), bids.end(), s.bid) - bids.begin()) + 1
                   : 0;
    score[i] = pcpm(s);
    t[i] = s.positive() ? s.bid : 0.0;
  }

  RewardResult out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (level[i] == level[j]) continue;
      const std::size_t h = level[i] > level[j] ? i : j;
      const std::size_t l = h == i ? j : i;
      out.reward_rank += detail::pay(detail::compare(score[h], score[l]), t[h], t[l], tie);
      out.reward_max += t[h];
      ++out.n_pairs;
    }
  }
  if (!(out.reward_max > 0.0)) throw Error(ErrorCode::NoRankedPairs, "no strict-level pair");
  out.csauc = out.reward_rank / out.reward_max;
  return out;
}

/// Same enumeration replayed over grid cells: bucket indices stand in for
/// pCPM and every cell pair is weighted by the product of its counts.
inline RewardResult csauc_exact_on_grid(const BucketGrid& grid,
                                        TiePolicy tie = TiePolicy::HalfCredit) {
  const auto cells = grid.cells();
  const auto& table = grid.level_table();
  RewardResult out;
  for (std::size_t a = 0; a < cells.size(); ++a) {
    for (std::size_t b = 0; b < cells.size(); ++b) {
      if (cells[a].level <= cells[b].level) continue;
      const double weight = static_cast<double>(cells[a].count) * static_cast<double>(cells[b].count);
      const double bid_high = table.t_value(cells[a].level);
      const double t_low = table.t_value(cells[b].level);
      out.reward_rank +=
          weight * detail::pay(detail::compare(cells[a].bucket, cells[b].bucket), bid_high, t_low, tie);
      out.reward_max += weight * bid_high;
      out.n_pairs += cells[a].count * cells[b].count;
    }
  }
  if (!(out.reward_max > 0.0)) throw Error(ErrorCode::NoRankedPairs, "no strict-level cell pair");
  out.csauc = out.reward_rank / out.reward_max;
  return out;
}

/// Positive-negative pairs ordered correctly by pCTR, ties scoring one half.
inline AucParts auc_pairwise_parts(std::span<const Sample> samples) {
  std::uint64_t twice_concordant = 0;
  std::uint64_t pairs = 0;
  for (const auto& p : samples) {
    if (!p.positive()) continue;
    for (const auto& q : samples) {
      if (q.positive()) continue;
      ++pairs;
      if (p.pctr > q.pctr)
        twice_concordant += 2;
      else if (p.pctr == q.pctr)
        twice_concordant += 1;
    }
  }
  if (pairs == 0) throw Error(ErrorCode::NoPosNegPairs, "need at least one positive and one negative");
  return {static_cast<double>(twice_concordant) / 2.0, static_cast<double>(pairs)};
}

inline double auc_pairwise(std::span<const Sample> samples) {
  return auc_pairwise_parts(samples).value();
}

}  // namespace csauc::oracle
