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

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "csauc/bucketing.hpp"
#include "csauc/csauc_dp.hpp"
#include "csauc/generator.hpp"
#include "csauc/oracle.hpp"

namespace csauc {

struct BenchConfig {
  std::vector<std::uint64_t> sizes{10000, 20000, 40000};
  std::vector<std::size_t> levels{16};    // target first-level bucket count (incl. negatives)
  std::vector<std::size_t> buckets{kDefaultPcpmBuckets};
  std::uint64_t seed = 42;
  int runs = 5;
  std::uint64_t oracle_cap = 4000;  // the quadratic oracle only runs up to this n
  double noise = 0.3;
};

struct BenchRow {
  std::uint64_t n = 0;
  std::size_t l1 = 0;
  std::size_t l2 = 0;
  std::size_t cells = 0;
  double grid_seconds = 0.0;
  double dp_seconds = 0.0;
  std::optional<double> oracle_seconds;
  double csauc = 0.0;
  std::optional<double> oracle_csauc;

  bool agrees() const {
    return !oracle_csauc || std::abs(csauc - *oracle_csauc) <= 1e-9 * std::max(1.0, std::abs(*oracle_csauc));
  }
};

namespace detail {

template <class Fn>
double median_seconds(int runs, Fn&& fn) {
  std::vector<double> times;
  for (int r = 0; r < std::max(1, runs); ++r) {
    auto start = std::chrono::steady_clock::now();
    fn();
    times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

}  // namespace detail

/// Times grid construction and the DP sweep (median over `runs`) for every
/// (size, levels, buckets) combination, plus the quadratic grid oracle when
/// n is within the cap. One configuration runs at a time.
inline std::vector<BenchRow> bench_scaling(const BenchConfig& config) {
  std::vector<BenchRow> rows;
  for (std::size_t levels : config.levels) {
    for (std::size_t buckets : config.buckets) {
      for (std::uint64_t n : config.sizes) {
        GeneratorConfig gen;
        gen.n = n;
        gen.seed = config.seed;
        gen.max_bid = static_cast<std::uint32_t>(std::max<std::size_t>(1, levels > 1 ? levels - 1 : 1));
        gen.campaigns = std::max<std::size_t>(64, 4 * levels);
        gen.noise = config.noise;
        // a high base CTR keeps every level populated at small n
        gen.base_ctr = 0.2;
        const auto samples = generate_samples(gen);

        BenchRow row;
        row.n = n;
        row.l2 = buckets;
        std::optional<BucketGrid> grid;
        row.grid_seconds = detail::median_seconds(config.runs, [&] {
          auto table = build_level_table(samples);
          auto norm = norm_from_samples(samples, buckets);
          grid.emplace(build_grid(samples, table, norm));
        });
        row.l1 = grid->level_table().num_levels();
        row.cells = grid->cells().size();
        RewardResult result;
        row.dp_seconds = detail::median_seconds(config.runs, [&] { result = compute_csauc_dp(*grid); });
        row.csauc = result.csauc;
        if (n <= config.oracle_cap) {
          RewardResult exact;
          row.oracle_seconds = detail::median_seconds(config.runs, [&] { exact = oracle::csauc_exact_on_grid(*grid); });
          row.oracle_csauc = exact.csauc;
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

inline void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "n,l1,l2,cells,grid_seconds,dp_seconds,oracle_seconds,csauc,oracle_csauc\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    out << r.n << ',' << r.l1 << ',' << r.l2 << ',' << r.cells << ',' << num(r.grid_seconds) << ','
        << num(r.dp_seconds) << ',' << (r.oracle_seconds ? num(*r.oracle_seconds) : "skipped") << ','
        << num(r.csauc) << ',' << (r.oracle_csauc ? num(*r.oracle_csauc) : "skipped") << '\n';
  }
}

}  // namespace csauc
