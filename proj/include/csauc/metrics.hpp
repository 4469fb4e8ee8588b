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
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "csauc/model.hpp"

namespace csauc {

struct ScoredLabel {
  double score = 0.0;
  bool positive = false;
};

/// AUC as concordant credit over positive-negative pairs. Keeping the two
/// parts lets grouped AUC pool groups without re-deriving them.
struct AucParts {
  double concordant = 0.0;
  double pairs = 0.0;
  double value() const { return concordant / pairs; }
};

/// Mann-Whitney U with mid-ranks. Sorts `scores` in place. Ranks are kept
/// doubled so every intermediate is an exact integer.
inline AucParts auc_parts(std::span<ScoredLabel> scores) {
  std::sort(scores.begin(), scores.end(),
            [](const ScoredLabel& a, const ScoredLabel& b) { return a.score < b.score; });
  std::uint64_t n_pos = 0;
  std::uint64_t rank_sum_x2 = 0;
  const std::size_t n = scores.size();
  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin + 1;
    while (end < n && scores[end].score == scores[begin].score) ++end;
    // ranks begin+1 .. end share the mid-rank (begin + 1 + end) / 2
    const std::uint64_t mid_rank_x2 = begin + 1 + end;
    for (std::size_t k = begin; k < end; ++k) {
      if (scores[k].positive) {
        ++n_pos;
        rank_sum_x2 += mid_rank_x2;
      }
    }
    begin = end;
  }
  const std::uint64_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw Error(ErrorCode::NoPosNegPairs, "need at least one positive and one negative");
  const std::uint64_t u_x2 = rank_sum_x2 - n_pos * (n_pos + 1);
  return {static_cast<double>(u_x2) / 2.0, static_cast<double>(n_pos) * static_cast<double>(n_neg)};
}

inline std::vector<ScoredLabel> scored_labels(std::span<const Sample> samples) {
  std::vector<ScoredLabel> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({s.pctr, s.positive()});
  return out;
}

inline AucParts auc_rank_parts(std::span<const Sample> samples) {
  auto scores = scored_labels(samples);
  return auc_parts(scores);
}

inline double auc_rank(std::span<const Sample> samples) { return auc_rank_parts(samples).value(); }

namespace detail {

// Dot-product accumulator in roughly twice working precision: products are
// split exactly with fma, sums are compensated.
class DotSum {
 public:
  void add(double x) noexcept { accumulate(x); }
  void add_product(double a, double b) noexcept {
    const double p = a * b;
    accumulate(p);
    carry_ += std::fma(a, b, -p);
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  void accumulate(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace detail

/// Streaming sums behind COPC and ROPR.
class CalibrationSums {
 public:
  void add(const Sample& s) noexcept {
    labels_.add(static_cast<double>(s.label));
    pctr_.add(s.pctr);
    label_bid_.add_product(static_cast<double>(s.label), s.bid);
    pctr_bid_.add_product(s.pctr, s.bid);
  }

  /// Clicks over predicted clicks.
  double copc() const {
    const double predicted = pctr_.value();
    if (!(predicted > 0.0)) throw Error(ErrorCode::ZeroPredictedClicks, "sum of pctr is zero");
    return labels_.value() / predicted;
  }

  /// Revenue over predicted revenue.
  double ropr() const {
    const double predicted = pctr_bid_.value();
    if (!(predicted > 0.0)) throw Error(ErrorCode::ZeroPredictedRevenue, "sum of pctr*bid is zero");
    return label_bid_.value() / predicted;
  }

 private:
  detail::DotSum labels_;
  detail::DotSum pctr_;
  detail::DotSum label_bid_;
  detail::DotSum pctr_bid_;
};

inline CalibrationSums calibration_sums(std::span<const Sample> samples) {
  CalibrationSums sums;
  for (const auto& s : samples) sums.add(s);
  return sums;
}

inline double copc(std::span<const Sample> samples) { return calibration_sums(samples).copc(); }
inline double ropr(std::span<const Sample> samples) { return calibration_sums(samples).ropr(); }

}  // namespace csauc
