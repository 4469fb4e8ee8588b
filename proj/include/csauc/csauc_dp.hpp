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

// CPM-sensitive AUC over a bucketed grid.
//
// For every pair of samples (h, l) with level(h) > level(l), ranked by pCPM:
//   pcpm(h) > pcpm(l)   pays bid(h)
//   pcpm(h) < pcpm(l)   pays T(l)   (0 for a negative, bid(l) for a positive)
//   same bucket         pays per TiePolicy
// csAUC = sum of payments / sum of bid(h) over the same pairs.
//
// Levels are swept in ascending order. Dense accumulators over pCPM buckets
// hold the count and T-sum of every strictly lower level, so each occupied
// cell prices all of its lower-level partners with one prefix count and one
// suffix T-sum. Same-level pairs never meet: a level is folded into the
// accumulators only after all of its cells have been priced.
//
// The accumulators are indexed by occupied bucket only; unoccupied buckets
// would contribute exact zeros to every prefix and suffix.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "csauc/bucketing.hpp"
#include "csauc/model.hpp"

namespace csauc {

struct RewardResult {
  double reward_rank = 0.0;
  double reward_max = 0.0;
  double csauc = 0.0;
  std::uint64_t n_pairs = 0;  // pairs with a strict level difference
};

enum class Summation { Plain, Compensated };

namespace detail {

struct PlainSum {
  double sum = 0.0;
  void add(double x) noexcept { sum += x; }
  double value() const noexcept { return sum; }
};

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) noexcept {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double value() const noexcept { return sum + carry; }
};

template <class Acc>
RewardResult csauc_sweep(const BucketGrid& grid, TiePolicy tie) {
  const auto cells = grid.cells();
  const auto ls = grid.ls();
  const auto& table = grid.level_table();

  std::vector<std::uint32_t> columns;
  columns.reserve(cells.size());
  for (const auto& c : cells) columns.push_back(c.bucket);
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
  const std::size_t width = columns.size();
  auto column_of = [&](std::uint32_t bucket) {
    return static_cast<std::size_t>(std::lower_bound(columns.begin(), columns.end(), bucket) -
                                    columns.begin());
  };

  std::vector<std::uint64_t> cnt_low(width, 0);
  std::vector<double> tsum_low(width, 0.0);
  std::vector<double> tsum_above(width, 0.0);  // sum of tsum_low over strictly higher columns

  Acc rank;
  Acc best;
  RewardResult out;
  std::uint64_t total_below = 0;

  std::size_t i = 0;
  for (std::size_t level = 0; level < ls.size(); ++level) {
    const std::size_t begin = i;
    while (i < cells.size() && cells[i].level == level) ++i;
    const std::size_t end = i;
    if (begin == end) continue;

    const double bid = table.t_value(level);
    if (level > 0 && total_below > 0) {
      double running = 0.0;
      for (std::size_t j = width; j-- > 0;) {
        tsum_above[j] = running;
        running += tsum_low[j];
      }
      std::uint64_t count_less = 0;
      std::size_t next = 0;
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t j = column_of(cells[k].bucket);
        for (; next < j; ++next) count_less += cnt_low[next];
        const double n = static_cast<double>(cells[k].count);
        rank.add(n * bid * static_cast<double>(count_less));
        rank.add(n * tsum_above[j]);
        if (tie == TiePolicy::HalfCredit)
          rank.add(n * 0.5 * (bid * static_cast<double>(cnt_low[j]) + tsum_low[j]));
        else
          rank.add(n * bid * static_cast<double>(cnt_low[j]));
      }
      best.add(static_cast<double>(ls[level]) * bid * static_cast<double>(total_below));
      out.n_pairs += ls[level] * total_below;
    }

    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t j = column_of(cells[k].bucket);
      cnt_low[j] += cells[k].count;
      if (level > 0) tsum_low[j] += static_cast<double>(cells[k].count) * bid;
    }
    total_below += ls[level];
  }

  out.reward_rank = rank.value();
  out.reward_max = best.value();
  if (!(out.reward_max > 0.0))
    throw Error(ErrorCode::NoRankedPairs, "no pair of samples with distinct bid levels");
  out.csauc = out.reward_rank / out.reward_max;
  return out;
}

}  // namespace detail

/// Runs in O(occupied cells + levels * occupied buckets).
inline RewardResult compute_csauc_dp(const BucketGrid& grid, TiePolicy tie = TiePolicy::HalfCredit,
                                     Summation summation = Summation::Plain) {
  if (grid.empty()) throw Error(ErrorCode::NoSamples, "empty grid");
  if (summation == Summation::Compensated) return detail::csauc_sweep<detail::CompensatedSum>(grid, tie);
  return detail::csauc_sweep<detail::PlainSum>(grid, tie);
}

/// Streams samples straight into a grid; raw samples are not retained.
class CsaucStream {
 public:
  CsaucStream(LevelBidTable table, NormParams norm) : builder_(std::move(table), norm) {}

  void add(const Sample& s) { builder_.add(s); }
  void merge(const CsaucStream& other) { builder_.merge(other.builder_); }
  std::uint64_t size() const noexcept { return builder_.total(); }
  BucketGrid grid() const { return builder_.finish(); }

  RewardResult finish(TiePolicy tie = TiePolicy::HalfCredit,
                      Summation summation = Summation::Plain) const {
    if (builder_.total() == 0) throw Error(ErrorCode::NoSamples, "empty sample stream");
    return compute_csauc_dp(builder_.finish(), tie, summation);
  }

 private:
  GridBuilder builder_;
};

template <class Range>
RewardResult compute_csauc_streaming(const Range& samples, const NormParams& norm,
                                     const LevelBidTable& table,
                                     TiePolicy tie = TiePolicy::HalfCredit,
                                     Summation summation = Summation::Plain) {
  CsaucStream stream(table, norm);
  for (const Sample& s : samples) stream.add(s);
  return stream.finish(tie, summation);
}

/// Convenience: per-dataset bucketing (levels and extrema from the samples
/// themselves) followed by the DP.
inline RewardResult csauc(std::span<const Sample> samples, TiePolicy tie = TiePolicy::HalfCredit,
                          const BucketingConfig& config = {},
                          Summation summation = Summation::Plain) {
  if (samples.empty()) throw Error(ErrorCode::NoSamples, "empty sample set");
  auto table = build_level_table(samples, config.bids);
  auto norm = norm_from_samples(samples, config.pcpm_buckets);
  return compute_csauc_dp(build_grid(samples, table, norm), tie, summation);
}

}  // namespace csauc
