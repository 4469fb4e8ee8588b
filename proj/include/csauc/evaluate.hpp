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

// End-to-end evaluation runs behind the `eval` and `oracle` commands.
//
// `evaluate` is two-pass: the first pass collects pCPM extrema and bid
// levels (globally, and per group when grouped metrics are requested), the
// second feeds bucketed grids and the scalar accumulators. Raw samples are
// never retained except the (pctr, label) pairs the rank AUC needs.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csauc/bucketing.hpp"
#include "csauc/csauc_dp.hpp"
#include "csauc/detail/parallel.hpp"
#include "csauc/grouping.hpp"
#include "csauc/ingest.hpp"
#include "csauc/metrics.hpp"
#include "csauc/model.hpp"
#include "csauc/oracle.hpp"
#include "csauc/report.hpp"

namespace csauc {

struct MetricSet {
  bool auc = false;
  bool csauc = false;
  bool gcsauc = false;
  bool gauc = false;
  bool copc = false;
  bool ropr = false;

  bool grouped() const noexcept { return gcsauc || gauc; }

  /// Comma-separated subset of auc,csauc,gcsauc,gauc,copc,ropr.
  static MetricSet parse(std::string_view list) {
    MetricSet set;
    std::size_t start = 0;
    while (start <= list.size()) {
      auto end = list.find(',', start);
      if (end == std::string_view::npos) end = list.size();
      auto name = list.substr(start, end - start);
      if (name == "auc") set.auc = true;
      else if (name == "csauc") set.csauc = true;
      else if (name == "gcsauc") set.gcsauc = true;
      else if (name == "gauc") set.gauc = true;
      else if (name == "copc") set.copc = true;
      else if (name == "ropr") set.ropr = true;
      else throw Error(ErrorCode::InvalidArgument, "unknown metric '" + std::string(name) + "'");
      start = end + 1;
    }
    return set;
  }
};

struct EvalOptions {
  MetricSet metrics = MetricSet::parse("auc,csauc,copc,ropr");
  TiePolicy tie = TiePolicy::HalfCredit;
  BucketingConfig bucketing;
  GroupPolicy group_policy;
  Summation summation = Summation::Plain;
  unsigned threads = 1;
  bool per_group = false;
};

namespace detail {

inline void require_group_keys(const PassOneStats& stats) {
  if (stats.without_group > 0)
    throw Error(ErrorCode::MissingGroupKey, std::to_string(stats.without_group) + " samples without a group key");
}

inline void fill_common(RunReport& report, const PassOneStats& stats, const IngestTally& tally) {
  report.ingest = tally;
  report.metrics.n_samples = stats.n_samples;
  report.metrics.n_positive = stats.n_positive;
  report.metrics.n_groups = stats.group_sizes.size();
}

inline void fill_grouped(RunReport& report, const EvalOptions& options, std::optional<GroupedResult> gcs,
                         std::optional<GroupedResult> ga) {
  auto& m = report.metrics;
  if (gcs) {
    m.gcsauc = gcs->value;
    m.skipped_groups = gcs->skipped_groups;
    if (!m.csauc) m.reward_max = gcs->attainable;
    if (options.per_group) report.per_group_gcsauc = std::move(gcs->per_group);
  }
  if (ga) {
    m.gauc = ga->value;
    if (!gcs) m.skipped_groups = ga->skipped_groups;
    if (options.per_group) report.per_group_gauc = std::move(ga->per_group);
  }
  report.include_per_group = options.per_group && (gcs || ga);
}

}  // namespace detail

/// Streaming two-pass evaluation over the bucketed DP.
inline RunReport evaluate(SampleSource& source, const EvalOptions& options) {
  const MetricSet& want = options.metrics;
  const std::size_t n_buckets = options.bucketing.pcpm_buckets;

  PassOneStats global;
  std::map<std::string, PassOneStats> per_group;
  IngestTally tally = source.for_each([&](const Sample& s) {
    global.observe(s);
    if (want.grouped() && s.group_key) per_group[*s.group_key].observe(s);
  });
  if (global.n_samples == 0) throw Error(ErrorCode::EmptyInput, "no valid samples");
  if (want.grouped()) detail::require_group_keys(global);

  std::optional<CsaucStream> stream;
  if (want.csauc)
    stream.emplace(build_level_table(global.positive_bids, options.bucketing.bids), global.norm(n_buckets));

  struct GroupState {
    std::uint64_t size = 0;
    std::optional<CsaucStream> stream;
    std::vector<ScoredLabel> scores;
  };
  std::map<std::string, GroupState> groups;
  for (const auto& [key, stats] : per_group) {
    auto& g = groups[key];
    g.size = stats.n_samples;
    if (want.gcsauc && stats.n_samples >= options.group_policy.min_group_size)
      g.stream.emplace(build_level_table(stats.positive_bids, options.bucketing.bids), stats.norm(n_buckets));
  }

  std::vector<ScoredLabel> scores;
  if (want.auc) scores.reserve(global.n_samples);
  CalibrationSums sums;
  source.for_each([&](const Sample& s) {
    if (stream) stream->add(s);
    if (want.auc) scores.push_back({s.pctr, s.positive()});
    if (want.copc || want.ropr) sums.add(s);
    if (want.grouped()) {
      auto& g = groups.at(*s.group_key);
      if (g.stream) g.stream->add(s);
      if (want.gauc && g.size >= options.group_policy.min_group_size) g.scores.push_back({s.pctr, s.positive()});
    }
  });

  RunReport report;
  detail::fill_common(report, global, tally);
  auto& m = report.metrics;
  if (stream) {
    auto r = stream->finish(options.tie, options.summation);
    m.csauc = r.csauc;
    m.reward_max = r.reward_max;
  }
  if (want.auc) m.auc = auc_parts(scores).value();
  if (want.copc) m.copc = sums.copc();
  if (want.ropr) m.ropr = sums.ropr();

  std::optional<GroupedResult> gcs;
  std::optional<GroupedResult> ga;
  if (want.grouped()) {
    std::vector<GroupState*> order;
    std::vector<std::string> keys;
    for (auto& [key, g] : groups) {
      keys.push_back(key);
      order.push_back(&g);
    }
    auto run = [&](bool csauc_mode) {
      std::vector<GroupOutcome> outcomes(order.size());
      detail::parallel_for(order.size(), options.threads, [&](std::size_t i) {
        GroupState& g = *order[i];
        GroupOutcome& o = outcomes[i];
        o.key = keys[i];
        o.size = g.size;
        if (g.size < options.group_policy.min_group_size) return;
        try {
          if (csauc_mode) {
            auto r = g.stream->finish(options.tie, options.summation);
            o.credit = r.reward_rank;
            o.attainable = r.reward_max;
            o.value = r.csauc;
          } else {
            auto parts = auc_parts(g.scores);
            o.credit = parts.concordant;
            o.attainable = parts.pairs;
            o.value = parts.value();
          }
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NoRankedPairs && e.code() != ErrorCode::NoPosNegPairs) throw;
        }
      });
      return aggregate_groups(std::move(outcomes), options.group_policy);
    };
    if (want.gcsauc) gcs = run(true);
    if (want.gauc) ga = run(false);
  }
  detail::fill_grouped(report, options, std::move(gcs), std::move(ga));
  return report;
}

/// Same report computed by the quadratic reference implementations on
/// exact pCPM values. Refuses inputs above `cap` samples unless forced.
inline RunReport evaluate_oracle(SampleSource& source, const EvalOptions& options,
                                 std::uint64_t cap = oracle::kDefaultCap, bool force = false) {
  const MetricSet& want = options.metrics;
  std::vector<Sample> samples;
  IngestTally tally = source.for_each([&](const Sample& s) {
    if (!force && samples.size() >= cap)
      throw Error(ErrorCode::InputTooLarge, "oracle is capped at " + std::to_string(cap) + " samples");
    samples.push_back(s);
  });
  if (samples.empty()) throw Error(ErrorCode::EmptyInput, "no valid samples");
  const PassOneStats stats = pass_one_stats(samples);
  if (want.grouped()) detail::require_group_keys(stats);

  RunReport report;
  detail::fill_common(report, stats, tally);
  auto& m = report.metrics;
  if (want.csauc) {
    auto r = oracle::csauc_exact(samples, options.tie);
    m.csauc = r.csauc;
    m.reward_max = r.reward_max;
  }
  if (want.auc) m.auc = oracle::auc_pairwise(samples);
  if (want.copc || want.ropr) {
    auto sums = calibration_sums(samples);
    if (want.copc) m.copc = sums.copc();
    if (want.ropr) m.ropr = sums.ropr();
  }
  std::optional<GroupedResult> gcs;
  std::optional<GroupedResult> ga;
  if (want.gcsauc) gcs = oracle::gcsauc_exact(samples, options.group_policy, options.tie);
  if (want.gauc) ga = oracle::gauc_pairwise(samples, options.group_policy);
  detail::fill_grouped(report, options, std::move(gcs), std::move(ga));
  return report;
}

}  // namespace csauc
