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

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace csauc {

enum class ErrorCode {
  NonBinaryLabel,
  NonPositiveBid,
  PctrOutOfRange,
  NonFiniteValue,
  FileNotFound,
  MalformedHeader,
  RowParseError,
  EmptyInput,
  NoSamples,
  LevelLookupMiss,
  NoRankedPairs,
  NoPosNegPairs,
  ZeroPredictedClicks,
  ZeroPredictedRevenue,
  AllGroupsSkipped,
  MissingGroupKey,
  InputTooLarge,
  InvalidArgument,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonBinaryLabel: return "NonBinaryLabel";
    case ErrorCode::NonPositiveBid: return "NonPositiveBid";
    case ErrorCode::PctrOutOfRange: return "PctrOutOfRange";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::RowParseError: return "RowParseError";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NoSamples: return "NoSamples";
    case ErrorCode::LevelLookupMiss: return "LevelLookupMiss";
    case ErrorCode::NoRankedPairs: return "NoRankedPairs";
    case ErrorCode::NoPosNegPairs: return "NoPosNegPairs";
    case ErrorCode::ZeroPredictedClicks: return "ZeroPredictedClicks";
    case ErrorCode::ZeroPredictedRevenue: return "ZeroPredictedRevenue";
    case ErrorCode::AllGroupsSkipped: return "AllGroupsSkipped";
    case ErrorCode::MissingGroupKey: return "MissingGroupKey";
    case ErrorCode::InputTooLarge: return "InputTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure in the toolkit surfaces as this exception; `code()` is the
/// machine-readable category and `what()` carries "<Name>: <context>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& context)
      : std::runtime_error(std::string(error_name(code)) +
                           (context.empty() ? "" : ": " + context)),
        code_(code) {}
  explicit Error(ErrorCode code) : Error(code, std::string()) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// One scored impression.
///   label  - observed click (0 or 1)
///   bid    - advertiser bid, currency per mille, > 0
///   pctr   - predicted CTR in [0, 1]
/// Negatives keep their real bid: it takes part in the pCPM comparison even
/// though a negative never pays out.
struct Sample {
  int label = 0;
  double bid = 0.0;
  double pctr = 0.0;
  std::optional<std::string> group_key;

  bool positive() const noexcept { return label == 1; }
  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Ranking score pCTR * bid, always computed in exactly one multiplication.
inline double pcpm(const Sample& s) noexcept { return s.pctr * s.bid; }

/// Payment rule when both members of a pair share a pCPM (bucket).
/// HalfCredit pays the expected revenue of a random tiebreak,
/// 0.5 * (bid_high + T_low); FullCredit pays bid_high (the ">=" reading).
enum class TiePolicy { HalfCredit, FullCredit };

inline std::optional<ErrorCode> check_record(int label, double bid, double pctr) noexcept {
  if (!std::isfinite(bid) || !std::isfinite(pctr)) return ErrorCode::NonFiniteValue;
  if (label != 0 && label != 1) return ErrorCode::NonBinaryLabel;
  if (!(bid > 0.0)) return ErrorCode::NonPositiveBid;
  if (pctr < 0.0 || pctr > 1.0) return ErrorCode::PctrOutOfRange;
  return std::nullopt;
}

/// Non-throwing validation used on ingestion hot paths. On failure `error`
/// receives the single offending category.
inline std::optional<Sample> try_validate_record(int label, double bid, double pctr,
                                                 std::optional<std::string> group_key,
                                                 ErrorCode& error) {
  if (auto bad = check_record(label, bid, pctr)) {
    error = *bad;
    return std::nullopt;
  }
  return Sample{label, bid, pctr, std::move(group_key)};
}

inline Sample validate_record(int label, double bid, double pctr,
                              std::optional<std::string> group_key = std::nullopt) {
  if (auto bad = check_record(label, bid, pctr)) {
    std::string field;
    switch (*bad) {
      case ErrorCode::NonBinaryLabel: field = "label=" + std::to_string(label); break;
      case ErrorCode::NonPositiveBid: field = "bid=" + std::to_string(bid); break;
      case ErrorCode::PctrOutOfRange: field = "pctr=" + std::to_string(pctr); break;
      default: field = std::isfinite(bid) ? "pctr" : "bid"; break;
    }
    throw Error(*bad, field);
  }
  return Sample{label, bid, pctr, std::move(group_key)};
}

/// All metrics a run may produce. Absent optionals were not requested (or
/// could not be computed for a reason recorded elsewhere in the report).
struct MetricsReport {
  std::optional<double> auc;
  std::optional<double> csauc;
  std::optional<double> gcsauc;
  std::optional<double> gauc;
  std::optional<double> copc;
  std::optional<double> ropr;
  std::uint64_t n_samples = 0;
  std::uint64_t n_positive = 0;
  std::uint64_t n_groups = 0;
  double reward_max = 0.0;
  std::uint64_t skipped_groups = 0;
};

}  // namespace csauc
