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

// Group-wise evaluation: gcsAUC (csAUC inside each group, bucketing done per
// group) and grouped AUC. Pairs only ever form inside a group.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csauc/bucketing.hpp"
#include "csauc/csauc_dp.hpp"
#include "csauc/detail/parallel.hpp"
#include "csauc/metrics.hpp"
#include "csauc/model.hpp"
#include "csauc/oracle.hpp"

namespace csauc {

enum class GroupWeight { RewardMax, ImpressionCount, Uniform };

inline GroupWeight parse_group_weight(std::string_view text) {
  if (text == "rewardmax") return GroupWeight::RewardMax;
  if (text == "count") return GroupWeight::ImpressionCount;
  if (text == "uniform") return GroupWeight::Uniform;
  throw Error(ErrorCode::InvalidArgument, "group weight '" + std::string(text) + "'");
}

struct GroupPolicy {
  GroupWeight weight = GroupWeight::RewardMax;
  std::size_t min_group_size = 2;
};

/// Result of evaluating one group. `credit / attainable` is the group's
/// value: reward_rank / reward_max for csAUC, concordant / pairs for AUC.
struct GroupOutcome {
  std::string key;
  std::uint64_t size = 0;
  std::optional<double> value;  // empty when the group was skipped
  double credit = 0.0;
  double attainable = 0.0;
};

struct GroupScore {
  std::string key;
  std::optional<double> value;
  double weight = 0.0;
  std::uint64_t size = 0;
};

struct GroupedResult {
  double value = 0.0;
  std::uint64_t n_groups = 0;
  std::uint64_t skipped_groups = 0;
  double attainable = 0.0;  // summed over scored groups
  std::vector<GroupScore> per_group;
};

/// Weighted mean over scored groups, in key order. With RewardMax weights
/// this is the pooled ratio sum(credit) / sum(attainable).
inline GroupedResult aggregate_groups(std::vector<GroupOutcome> outcomes, const GroupPolicy& policy) {
  std::sort(outcomes.begin(), outcomes.end(),
            [](const GroupOutcome& a, const GroupOutcome& b) { return a.key < b.key; });
  GroupedResult out;
  out.n_groups = outcomes.size();
  double numerator = 0.0;
  double denominator = 0.0;
  std::size_t scored = 0;
  std::optional<double> only_value;
  for (auto& g : outcomes) {
    GroupScore score{std::move(g.key), g.value, 0.0, g.size};
    if (!g.value) {
      ++out.skipped_groups;
      out.per_group.push_back(std::move(score));
      continue;
    }
    switch (policy.weight) {
      case GroupWeight::RewardMax: score.weight = g.attainable; break;
      case GroupWeight::ImpressionCount: score.weight = static_cast<double>(g.size); break;
      case GroupWeight::Uniform: score.weight = 1.0; break;
    }
    if (policy.weight == GroupWeight::RewardMax) {
      numerator += g.credit;
      denominator += g.attainable;
    } else {
      numerator += score.weight * *g.value;
      denominator += score.weight;
    }
    out.attainable += g.attainable;
    ++scored;
    only_value = g.value;
    out.per_group.push_back(std::move(score));
  }
  if (scored == 0) throw Error(ErrorCode::AllGroupsSkipped, std::to_string(out.n_groups) + " groups");
  // one group: its own value, bit-for-bit
  out.value = scored == 1 ? *only_value : numerator / denominator;
  return out;
}

inline std::map<std::string, std::vector<Sample>> partition_by_group(std::span<const Sample> samples) {
  std::map<std::string, std::vector<Sample>> groups;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!s.group_key) throw Error(ErrorCode::MissingGroupKey, "sample " + std::to_string(i));
    groups[*s.group_key].push_back(s);
  }
  return groups;
}

/// Partitions, evaluates each group with `score` (returning credit and
/// attainable), skips groups that are too small or have no rankable pair.
template <class ScoreFn>
GroupedResult evaluate_groups(std::span<const Sample> samples, const GroupPolicy& policy,
                              unsigned threads, ScoreFn&& score) {
  if (samples.empty()) throw Error(ErrorCode::NoSamples, "no samples to group");
  auto groups = partition_by_group(samples);
  std::vector<const std::pair<const std::string, std::vector<Sample>>*> order;
  order.reserve(groups.size());
  for (const auto& entry : groups) order.push_back(&entry);

  std::vector<GroupOutcome> outcomes(order.size());
  detail::parallel_for(order.size(), threads, [&](std::size_t i) {
    const auto& [key, members] = *order[i];
    GroupOutcome& g = outcomes[i];
    g.key = key;
    g.size = members.size();
    if (members.size() < policy.min_group_size) return;
    try {
      auto [credit, attainable] = score(std::span<const Sample>(members));
      g.credit = credit;
      g.attainable = attainable;
      g.value = credit / attainable;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoRankedPairs && e.code() != ErrorCode::NoPosNegPairs) throw;
    }
  });
  return aggregate_groups(std::move(outcomes), policy);
}

/// csAUC computed inside each group with its own levels and pCPM extrema.
inline GroupedResult gcsauc(std::span<const Sample> samples, const GroupPolicy& policy = {},
                            TiePolicy tie = TiePolicy::HalfCredit, const BucketingConfig& config = {},
                            unsigned threads = 1) {
  return evaluate_groups(samples, policy, threads, [&](std::span<const Sample> group) {
    auto r = csauc(group, tie, config);
    return std::pair{r.reward_rank, r.reward_max};
  });
}

/// Grouped AUC. RewardMax weighting uses each group's positive-negative pair
/// count, which makes the result the pooled within-group AUC.
inline GroupedResult gauc(std::span<const Sample> samples, const GroupPolicy& policy = {},
                          unsigned threads = 1) {
  return evaluate_groups(samples, policy, threads, [](std::span<const Sample> group) {
    auto parts = auc_rank_parts(group);
    return std::pair{parts.concordant, parts.pairs};
  });
}

namespace oracle {

inline GroupedResult gcsauc_exact(std::span<const Sample> samples, const GroupPolicy& policy = {},
                                  TiePolicy tie = TiePolicy::HalfCredit) {
  return evaluate_groups(samples, policy, 1, [&](std::span<const Sample> group) {
    auto r = csauc_exact(group, tie);
    return std::pair{r.reward_rank, r.reward_max};
  });
}

inline GroupedResult gauc_pairwise(std::span<const Sample> samples, const GroupPolicy& policy = {}) {
  return evaluate_groups(samples, policy, 1, [](std::span<const Sample> group) {
    auto parts = auc_pairwise_parts(group);
    return std::pair{parts.concordant, parts.pairs};
  });
}

}  // namespace oracle

}  // namespace csauc
