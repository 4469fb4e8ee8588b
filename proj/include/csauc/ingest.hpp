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

// Streaming readers for CSV, TSV and JSON-lines sample files.
//
// CSV/TSV dialect: one record per line, ',' (or '\t') separator, no quoting,
// '.' decimal point, optional header naming the columns. Blank lines are
// ignored. Columns: label (integer), bid (decimal), pctr (decimal), and an
// optional group key. JSONL: one object per line with the same keys.

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "csauc/bucketing.hpp"
#include "csauc/model.hpp"

namespace csauc {

enum class InputFormat { Csv, Tsv, Jsonl };

inline InputFormat parse_input_format(std::string_view text) {
  if (text == "csv") return InputFormat::Csv;
  if (text == "tsv") return InputFormat::Tsv;
  if (text == "jsonl") return InputFormat::Jsonl;
  throw Error(ErrorCode::InvalidArgument, "input format '" + std::string(text) + "'");
}

/// Guesses from the file extension; anything unrecognised is CSV.
inline InputFormat infer_input_format(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
  };
  if (ends_with(".tsv") || ends_with(".tab")) return InputFormat::Tsv;
  if (ends_with(".jsonl") || ends_with(".ndjson") || ends_with(".json")) return InputFormat::Jsonl;
  return InputFormat::Csv;
}

/// Header names (CSV/TSV with header, JSONL keys) and positions (headerless
/// CSV/TSV). The group column is optional in both.
struct ColumnMap {
  std::string label = "label";
  std::string bid = "bid";
  std::string pctr = "pctr";
  std::string group = "group";
  std::size_t label_index = 0;
  std::size_t bid_index = 1;
  std::size_t pctr_index = 2;
  std::optional<std::size_t> group_index = 3;
};

struct InputSpec {
  std::string path = "-";  // "-" is standard input
  InputFormat format = InputFormat::Csv;
  bool has_header = true;
  ColumnMap columns;
  bool strict = false;  // first rejected row becomes fatal
};

/// Per-category count of rejected rows. Every non-blank data row is either
/// accepted or counted under exactly one category.
struct IngestTally {
  std::uint64_t rows = 0;
  std::uint64_t accepted = 0;
  std::map<ErrorCode, std::uint64_t> rejected;

  std::uint64_t rejected_total() const {
    std::uint64_t total = 0;
    for (const auto& [code, n] : rejected) total += n;
    return total;
  }
  friend bool operator==(const IngestTally&, const IngestTally&) = default;
};

/// Pulls validated samples from a text stream, one line at a time.
class SampleReader {
 public:
  SampleReader(std::istream& in, InputSpec spec) : in_(in), spec_(std::move(spec)) {
    if (spec_.format == InputFormat::Jsonl) {
      header_done_ = true;
    } else if (!spec_.has_header) {
      label_col_ = spec_.columns.label_index;
      bid_col_ = spec_.columns.bid_index;
      pctr_col_ = spec_.columns.pctr_index;
      group_col_ = spec_.columns.group_index;
      header_done_ = true;
    }
  }

  /// False at end of input. Rejected rows are tallied and skipped, or thrown
  /// in strict mode.
  bool next(Sample& out) {
    while (std::getline(in_, line_)) {
      ++line_no_;
      std::string_view line = line_;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (is_blank(line)) continue;
      if (!header_done_) {
        parse_header(line);
        continue;
      }
      ++tally_.rows;
      ErrorCode error = ErrorCode::RowParseError;
      std::optional<Sample> sample =
          spec_.format == InputFormat::Jsonl ? parse_json(line, error) : parse_delimited(line, error);
      if (sample) {
        ++tally_.accepted;
        out = std::move(*sample);
        return true;
      }
      ++tally_.rejected[error];
      if (spec_.strict)
        throw Error(error, "line " + std::to_string(line_no_) + ": '" + std::string(line.substr(0, 120)) + "'");
    }
    return false;
  }

  const IngestTally& tally() const noexcept { return tally_; }

 private:
  static bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t") == std::string_view::npos;
  }

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  }

  char separator() const { return spec_.format == InputFormat::Tsv ? '\t' : ','; }

  void split(std::string_view line) {
    fields_.clear();
    const char sep = separator();
    std::size_t start = 0;
    while (true) {
      auto pos = line.find(sep, start);
      if (pos == std::string_view::npos) {
        fields_.push_back(trim(line.substr(start)));
        break;
      }
      fields_.push_back(trim(line.substr(start, pos - start)));
      start = pos + 1;
    }
  }

  void parse_header(std::string_view line) {
    header_done_ = true;
    if (spec_.format == InputFormat::Jsonl) return;
    split(line);
    auto find = [&](const std::string& name) -> std::optional<std::size_t> {
      auto it = std::find(fields_.begin(), fields_.end(), std::string_view(name));
      if (it == fields_.end()) return std::nullopt;
      return static_cast<std::size_t>(it - fields_.begin());
    };
    auto label = find(spec_.columns.label);
    auto bid = find(spec_.columns.bid);
    auto pctr = find(spec_.columns.pctr);
    if (!label || !bid || !pctr)
      throw Error(ErrorCode::MalformedHeader, "header '" + std::string(line) + "' lacks " +
                                                  spec_.columns.label + "/" + spec_.columns.bid + "/" +
                                                  spec_.columns.pctr);
    label_col_ = *label;
    bid_col_ = *bid;
    pctr_col_ = *pctr;
    group_col_ = find(spec_.columns.group);
  }

  template <class T>
  static bool parse_number(std::string_view text, T& value) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = first + text.size();
    if (*first == '+') ++first;
    auto [p, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && p == last;
  }

  std::optional<Sample> parse_delimited(std::string_view line, ErrorCode& error) {
    split(line);
    const std::size_t needed = std::max({label_col_, bid_col_, pctr_col_}) + 1;
    if (fields_.size() < needed) {
      error = ErrorCode::RowParseError;
      return std::nullopt;
    }
    int label = 0;
    double bid = 0;
    double pctr = 0;
    if (!parse_number(fields_[label_col_], label) || !parse_number(fields_[bid_col_], bid) ||
        !parse_number(fields_[pctr_col_], pctr)) {
      error = ErrorCode::RowParseError;
      return std::nullopt;
    }
    std::optional<std::string> group;
    if (group_col_ && *group_col_ < fields_.size() && !fields_[*group_col_].empty()) group.emplace(fields_[*group_col_]);
    return try_validate_record(label, bid, pctr, std::move(group), error);
  }

  std::optional<Sample> parse_json(std::string_view line, ErrorCode& error) {
    error = ErrorCode::RowParseError;
    auto doc = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
    auto label_it = doc.find(spec_.columns.label);
    auto bid_it = doc.find(spec_.columns.bid);
    auto pctr_it = doc.find(spec_.columns.pctr);
    if (label_it == doc.end() || bid_it == doc.end() || pctr_it == doc.end()) return std::nullopt;
    if (!label_it->is_number_integer() || !bid_it->is_number() || !pctr_it->is_number()) return std::nullopt;
    const auto raw_label = label_it->get<std::int64_t>();
    const int label = raw_label < std::numeric_limits<int>::min() || raw_label > std::numeric_limits<int>::max()
                          ? 2
                          : static_cast<int>(raw_label);
    std::optional<std::string> group;
    if (auto g = doc.find(spec_.columns.group); g != doc.end() && !g->is_null())
      group = g->is_string() ? g->get<std::string>() : g->dump();
    return try_validate_record(label, bid_it->get<double>(), pctr_it->get<double>(), std::move(group), error);
  }

  std::istream& in_;
  InputSpec spec_;
  std::string line_;
  std::vector<std::string_view> fields_;
  std::uint64_t line_no_ = 0;
  bool header_done_ = false;
  std::size_t label_col_ = 0;
  std::size_t bid_col_ = 1;
  std::size_t pctr_col_ = 2;
  std::optional<std::size_t> group_col_;
  IngestTally tally_;
};

namespace detail {

inline std::unique_ptr<std::ifstream> open_input(const std::string& path) {
  auto file = std::make_unique<std::ifstream>();
  file->open(path, std::ios::in | std::ios::binary);
  if (!file->is_open()) throw Error(ErrorCode::FileNotFound, path);
  return file;
}

}  // namespace detail

/// Reads every valid sample of `spec` in file order.
template <class Fn>
IngestTally stream_samples(const InputSpec& spec, Fn&& on_sample) {
  std::unique_ptr<std::ifstream> file;
  std::istream* in = &std::cin;
  if (spec.path != "-") {
    file = detail::open_input(spec.path);
    in = file.get();
  }
  SampleReader reader(*in, spec);
  Sample s;
  while (reader.next(s)) on_sample(s);
  return reader.tally();
}

inline std::vector<Sample> read_samples(const InputSpec& spec, IngestTally* tally = nullptr) {
  std::vector<Sample> out;
  auto t = stream_samples(spec, [&](const Sample& s) { out.push_back(s); });
  if (tally) *tally = t;
  return out;
}

/// A sample source that can be traversed more than once. Files are re-read
/// on every pass; standard input (or any supplied stream) is buffered in
/// memory on the first pass and replayed afterwards.
class SampleSource {
 public:
  explicit SampleSource(InputSpec spec) : spec_(std::move(spec)) {
    if (spec_.path == "-")
      stream_ = &std::cin;
    else
      detail::open_input(spec_.path);  // fail early
  }

  SampleSource(InputSpec spec, std::istream& in) : spec_(std::move(spec)), stream_(&in) {}

  bool buffered() const noexcept { return stream_ != nullptr; }

  template <class Fn>
  IngestTally for_each(Fn&& fn) {
    if (!buffered()) return stream_samples(spec_, fn);
    if (!loaded_) {
      SampleReader reader(*stream_, spec_);
      Sample s;
      while (reader.next(s)) buffer_.push_back(s);
      tally_ = reader.tally();
      loaded_ = true;
    }
    for (const auto& s : buffer_) fn(s);
    return tally_;
  }

 private:
  InputSpec spec_;
  std::istream* stream_ = nullptr;
  bool loaded_ = false;
  std::vector<Sample> buffer_;
  IngestTally tally_;
};

/// First-pass statistics: global pCPM extrema, positive-bid histogram and
/// group cardinalities.
struct PassOneStats {
  std::uint64_t n_samples = 0;
  std::uint64_t n_positive = 0;
  double min_pcpm = std::numeric_limits<double>::infinity();
  double max_pcpm = -std::numeric_limits<double>::infinity();
  BidHistogram positive_bids;
  std::map<std::string, std::uint64_t> group_sizes;
  std::uint64_t without_group = 0;

  void observe(const Sample& s) {
    ++n_samples;
    const double v = pcpm(s);
    min_pcpm = std::min(min_pcpm, v);
    max_pcpm = std::max(max_pcpm, v);
    if (s.positive()) {
      ++n_positive;
      ++positive_bids[s.bid];
    }
    if (s.group_key)
      ++group_sizes[*s.group_key];
    else
      ++without_group;
  }

  std::vector<double> distinct_positive_bids() const {
    std::vector<double> out;
    out.reserve(positive_bids.size());
    for (const auto& [bid, n] : positive_bids) out.push_back(bid);
    return out;
  }

  NormParams norm(std::size_t n_buckets = kDefaultPcpmBuckets) const {
    if (n_samples == 0) throw Error(ErrorCode::EmptyInput, "no valid samples");
    NormParams p{min_pcpm, max_pcpm, n_buckets};
    p.validate();
    return p;
  }
};

inline PassOneStats pass_one_stats(std::span<const Sample> samples) {
  PassOneStats stats;
  for (const auto& s : samples) stats.observe(s);
  return stats;
}

/// Runs the first pass over `spec`.
inline PassOneStats two_pass_plan(const InputSpec& spec, IngestTally* tally = nullptr) {
  PassOneStats stats;
  auto t = stream_samples(spec, [&](const Sample& s) { stats.observe(s); });
  if (tally) *tally = t;
  if (stats.n_samples == 0) throw Error(ErrorCode::EmptyInput, spec.path);
  return stats;
}

}  // namespace csauc
