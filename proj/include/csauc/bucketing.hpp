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

// Two-level bucketing of scored samples.
//
// First level: the bid level. Level 0 holds every negative sample; positive
// samples are bucketed by bid so that a larger bid never lands in a smaller
// level. Each positive level carries a representative bid which is the
// revenue paid when a sample of that level "wins" a pair.
//
// Second level: the pCPM bucket, floor(minmax(pcpm) * (n_buckets - 1)).
//
// Counting samples per (level, bucket) cell gives the sparse triple data
// (level, bucket, count) consumed by the csAUC dynamic program.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "csauc/model.hpp"

namespace csauc {

inline constexpr std::size_t kDefaultPcpmBuckets = 100001;

/// Positive bid -> number of positive samples carrying it, ascending by bid.
using BidHistogram = std::map<double, std::uint64_t>;

struct BidQuantization {
  enum class Kind { ExactBids, FixedWidth, Quantile };

  Kind kind = Kind::ExactBids;
  double width = 0.0;     // FixedWidth only
  std::size_t count = 0;  // Quantile only

  static BidQuantization exact() { return {}; }
  static BidQuantization fixed_width(double w) { return {Kind::FixedWidth, w, 0}; }
  static BidQuantization quantile(std::size_t k) { return {Kind::Quantile, 0.0, k}; }

  /// Parses "exact", "width:W" or "quantile:K".
  static BidQuantization parse(std::string_view text) {
    auto bad = [&] { return Error(ErrorCode::InvalidArgument, "bid buckets '" + std::string(text) + "'"); };
    if (text == "exact") return exact();
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw bad();
    auto head = text.substr(0, colon);
    auto tail = text.substr(colon + 1);
    const char* first = tail.data();
    const char* last = tail.data() + tail.size();
    if (head == "width") {
      double w = 0;
      auto [p, ec] = std::from_chars(first, last, w);
      if (ec != std::errc() || p != last || !(w > 0) || !std::isfinite(w)) throw bad();
      return fixed_width(w);
    }
    if (head == "quantile") {
      std::size_t k = 0;
      auto [p, ec] = std::from_chars(first, last, k);
      if (ec != std::errc() || p != last || k == 0) throw bad();
      return quantile(k);
    }
    throw bad();
  }
};

/// Level 0 = negatives (T-value 0). Levels 1..K are positive bid levels with
/// strictly increasing representative bids.
class LevelBidTable {
 public:
  struct PositiveLevel {
    double lo = 0.0;  // smallest member bid
    double hi = 0.0;  // largest member bid
    double representative = 0.0;
  };

  LevelBidTable() = default;

  /// Levels must be ordered, with disjoint member hulls and strictly
  /// increasing representatives.
  explicit LevelBidTable(std::vector<PositiveLevel> levels) : levels_(std::move(levels)) {
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      const auto& l = levels_[i];
      if (!(l.lo <= l.hi) || !(l.representative > 0.0))
        throw Error(ErrorCode::InvalidArgument, "malformed bid level " + std::to_string(i + 1));
      if (i > 0 && !(levels_[i - 1].hi < l.lo && levels_[i - 1].representative < l.representative))
        throw Error(ErrorCode::InvalidArgument, "bid levels not strictly increasing at " + std::to_string(i + 1));
    }
  }

  std::size_t num_levels() const noexcept { return levels_.size() + 1; }
  std::size_t num_positive_levels() const noexcept { return levels_.size(); }
  std::span<const PositiveLevel> positive_levels() const noexcept { return levels_; }

  /// Revenue paid when a sample of this level wins a pair: 0 for level 0.
  double t_value(std::size_t level) const noexcept {
    return level == 0 ? 0.0 : levels_[level - 1].representative;
  }

  std::optional<std::size_t> find_positive_level(double bid) const noexcept {
    auto it = std::lower_bound(levels_.begin(), levels_.end(), bid,
                               [](const PositiveLevel& l, double b) { return l.hi < b; });
    if (it == levels_.end() || bid < it->lo) return std::nullopt;
    return static_cast<std::size_t>(it - levels_.begin()) + 1;
  }

  std::size_t level_of(const Sample& s) const {
    if (!s.positive()) return 0;
    if (auto level = find_positive_level(s.bid)) return *level;
    throw Error(ErrorCode::LevelLookupMiss, "bid " + std::to_string(s.bid) + " outside level table");
  }

  friend bool operator==(const LevelBidTable& a, const LevelBidTable& b) {
    return std::equal(a.levels_.begin(), a.levels_.end(), b.levels_.begin(), b.levels_.end(),
                      [](const PositiveLevel& x, const PositiveLevel& y) {
                        return x.lo == y.lo && x.hi == y.hi && x.representative == y.representative;
                      });
  }

 private:
  std::vector<PositiveLevel> levels_;
};

inline BidHistogram positive_bid_histogram(std::span<const Sample> samples) {
  BidHistogram hist;
  for (const auto& s : samples)
    if (s.positive()) ++hist[s.bid];
  return hist;
}

/// Builds the bid-level table from the positive-bid histogram. An empty
/// histogram is legal and yields a table holding only level 0.
inline LevelBidTable build_level_table(const BidHistogram& positive_bids, BidQuantization q) {
  using Level = LevelBidTable::PositiveLevel;
  std::vector<Level> levels;
  if (positive_bids.empty()) return LevelBidTable(std::move(levels));

  switch (q.kind) {
    case BidQuantization::Kind::ExactBids:
      levels.reserve(positive_bids.size());
      for (const auto& [bid, cnt] : positive_bids) levels.push_back({bid, bid, bid});
      break;

    case BidQuantization::Kind::FixedWidth: {
      if (!(q.width > 0) || !std::isfinite(q.width))
        throw Error(ErrorCode::InvalidArgument, "bid bucket width must be positive");
      const double origin = positive_bids.begin()->first;
      std::optional<double> current;
      for (const auto& [bid, cnt] : positive_bids) {
        double slot = std::floor((bid - origin) / q.width);
        if (!current || slot != *current) {
          levels.push_back({bid, bid, 0.0});
          current = slot;
        }
        levels.back().hi = bid;
      }
      for (auto& l : levels) l.representative = 0.5 * (l.lo + l.hi);
      break;
    }

    case BidQuantization::Kind::Quantile: {
      if (q.count == 0) throw Error(ErrorCode::InvalidArgument, "quantile count must be positive");
      unsigned __int128 total = 0;
      for (const auto& [bid, cnt] : positive_bids) total += cnt;
      unsigned __int128 before = 0;
      std::optional<unsigned __int128> current;
      double weighted = 0.0;
      std::uint64_t members = 0;
      auto close = [&] {
        if (members > 0) levels.back().representative = weighted / static_cast<double>(members);
      };
      for (const auto& [bid, cnt] : positive_bids) {
        unsigned __int128 slot = before * q.count / total;
        if (!current || slot != *current) {
          close();
          levels.push_back({bid, bid, 0.0});
          weighted = 0.0;
          members = 0;
          current = slot;
        }
        levels.back().hi = bid;
        weighted += bid * static_cast<double>(cnt);
        members += cnt;
        before += cnt;
      }
      close();
      break;
    }
  }
  return LevelBidTable(std::move(levels));
}

inline LevelBidTable build_level_table(std::span<const Sample> samples, BidQuantization q = {}) {
  if (samples.empty()) throw Error(ErrorCode::NoSamples, "cannot build bid levels");
  return build_level_table(positive_bid_histogram(samples), q);
}

struct NormParams {
  double min_pcpm = 0.0;
  double max_pcpm = 0.0;
  std::size_t n_buckets = kDefaultPcpmBuckets;

  void validate() const {
    if (n_buckets == 0 || n_buckets > std::numeric_limits<std::uint32_t>::max())
      throw Error(ErrorCode::InvalidArgument, "pcpm bucket count out of range");
    if (!(min_pcpm <= max_pcpm))
      throw Error(ErrorCode::InvalidArgument, "min pcpm exceeds max pcpm");
  }
  friend bool operator==(const NormParams&, const NormParams&) = default;
};

inline NormParams norm_from_samples(std::span<const Sample> samples,
                                    std::size_t n_buckets = kDefaultPcpmBuckets) {
  if (samples.empty()) throw Error(ErrorCode::NoSamples, "cannot derive pcpm extrema");
  NormParams norm{pcpm(samples.front()), pcpm(samples.front()), n_buckets};
  for (const auto& s : samples) {
    double v = pcpm(s);
    norm.min_pcpm = std::min(norm.min_pcpm, v);
    norm.max_pcpm = std::max(norm.max_pcpm, v);
  }
  norm.validate();
  return norm;
}

/// floor(minmax(pcpm) * (n_buckets - 1)) clamped to [0, n_buckets - 1];
/// everything maps to 0 when the extrema coincide.
inline std::size_t pcpm_bucket(double value, const NormParams& norm) noexcept {
  if (!(norm.max_pcpm > norm.min_pcpm)) return 0;
  const double top = static_cast<double>(norm.n_buckets - 1);
  const double scaled = (value - norm.min_pcpm) / (norm.max_pcpm - norm.min_pcpm) * top;
  if (!(scaled > 0.0)) return 0;
  if (scaled >= top) return norm.n_buckets - 1;
  return static_cast<std::size_t>(std::floor(scaled));
}

struct GridCell {
  std::uint32_t level = 0;
  std::uint32_t bucket = 0;
  std::uint64_t count = 0;
  friend bool operator==(const GridCell&, const GridCell&) = default;
};

/// Immutable sparse (level, pcpm bucket) -> count grid. Cells are sorted by
/// (level, bucket), hold nonzero counts and are unique.
class BucketGrid {
 public:
  BucketGrid(LevelBidTable table, NormParams norm, std::vector<GridCell> cells)
      : table_(std::move(table)), norm_(norm), cells_(std::move(cells)) {
    norm_.validate();
    std::sort(cells_.begin(), cells_.end(), [](const GridCell& a, const GridCell& b) {
      return a.level != b.level ? a.level < b.level : a.bucket < b.bucket;
    });
    std::vector<GridCell> merged;
    merged.reserve(cells_.size());
    for (const auto& c : cells_) {
      if (c.level >= table_.num_levels())
        throw Error(ErrorCode::InvalidArgument, "grid cell level outside table");
      if (c.bucket >= norm_.n_buckets)
        throw Error(ErrorCode::InvalidArgument, "grid cell bucket outside pcpm range");
      if (c.count == 0) continue;
      if (!merged.empty() && merged.back().level == c.level && merged.back().bucket == c.bucket)
        merged.back().count += c.count;
      else
        merged.push_back(c);
    }
    cells_ = std::move(merged);
    ls_.assign(table_.num_levels(), 0);
    for (const auto& c : cells_) {
      ls_[c.level] += c.count;
      total_ += c.count;
    }
  }

  std::span<const GridCell> cells() const noexcept { return cells_; }
  /// Per-level sample totals.
  std::span<const std::uint64_t> ls() const noexcept { return ls_; }
  std::uint64_t total() const noexcept { return total_; }
  const LevelBidTable& level_table() const noexcept { return table_; }
  const NormParams& norm() const noexcept { return norm_; }
  bool empty() const noexcept { return total_ == 0; }

 private:
  LevelBidTable table_;
  NormParams norm_;
  std::vector<GridCell> cells_;
  std::vector<std::uint64_t> ls_;
  std::uint64_t total_ = 0;
};

/// Accumulates samples into cells. Builders over the same table and norm can
/// be merged by cell-wise addition, so sharded construction is possible.
class GridBuilder {
 public:
  GridBuilder(LevelBidTable table, NormParams norm) : table_(std::move(table)), norm_(norm) {
    norm_.validate();
  }

  void add(const Sample& s) {
    const std::size_t level = table_.level_of(s);
    add_cell(level, pcpm_bucket(pcpm(s), norm_), 1);
  }

  void add_cell(std::size_t level, std::size_t bucket, std::uint64_t count) {
    counts_[(static_cast<std::uint64_t>(level) << 32) | static_cast<std::uint64_t>(bucket)] += count;
    total_ += count;
  }

  void merge(const GridBuilder& other) {
    if (!(table_ == other.table_) || !(norm_ == other.norm_))
      throw Error(ErrorCode::InvalidArgument, "merging grids with different bucketing");
    for (const auto& [key, cnt] : other.counts_) counts_[key] += cnt;
    total_ += other.total_;
  }

  std::uint64_t total() const noexcept { return total_; }
  std::size_t occupied() const noexcept { return counts_.size(); }
  void reserve(std::size_t cells) { counts_.reserve(cells); }

  BucketGrid finish() const {
    std::vector<GridCell> cells;
    cells.reserve(counts_.size());
    for (const auto& [key, cnt] : counts_)
      cells.push_back({static_cast<std::uint32_t>(key >> 32),
                       static_cast<std::uint32_t>(key & 0xffffffffu), cnt});
    return BucketGrid(table_, norm_, std::move(cells));
  }

 private:
  LevelBidTable table_;
  NormParams norm_;
  std::unordered_map<std::uint64_t, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

inline BucketGrid build_grid(std::span<const Sample> samples, const LevelBidTable& table,
                             const NormParams& norm) {
  if (samples.empty()) throw Error(ErrorCode::NoSamples, "cannot build an empty grid");
  GridBuilder builder(table, norm);
  for (const auto& s : samples) builder.add(s);
  return builder.finish();
}

/// Bucketing knobs shared by every csAUC evaluation path.
struct BucketingConfig {
  BidQuantization bids;
  std::size_t pcpm_buckets = kDefaultPcpmBuckets;
};

}  // namespace csauc
