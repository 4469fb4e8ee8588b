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

// Report rendering. JSON keys come out in a fixed order and reals use a
// fixed number of decimals, so identical runs produce identical bytes.

#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "csauc/grouping.hpp"
#include "csauc/ingest.hpp"
#include "csauc/model.hpp"

namespace csauc {

inline constexpr int kDefaultPrecision = 6;

enum class ReportFormat { Json, Text };

inline ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "text") return ReportFormat::Text;
  throw Error(ErrorCode::InvalidArgument, "report format '" + std::string(text) + "'");
}

struct RunReport {
  MetricsReport metrics;
  IngestTally ingest;
  bool include_per_group = false;
  std::vector<GroupScore> per_group_gcsauc;
  std::vector<GroupScore> per_group_gauc;
};

inline std::string format_fixed(double value, int precision) {
  if (!std::isfinite(value)) return "null";
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

inline std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

namespace detail {

inline void write_group_list(std::ostream& out, const std::vector<GroupScore>& groups, int precision) {
  out << '[';
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    if (i) out << ',';
    out << "{\"key\":" << json_string(g.key)
        << ",\"value\":" << (g.value ? format_fixed(*g.value, precision) : "null")
        << ",\"weight\":" << format_fixed(g.weight, precision) << ",\"size\":" << g.size << '}';
  }
  out << ']';
}

}  // namespace detail

inline void write_json(const RunReport& report, std::ostream& out, int precision = kDefaultPrecision) {
  const auto& m = report.metrics;
  bool first = true;
  auto key = [&](std::string_view name) {
    out << (first ? "{" : ",") << '"' << name << "\":";
    first = false;
  };
  auto real = [&](std::string_view name, const std::optional<double>& v) {
    if (!v) return;
    key(name);
    out << format_fixed(*v, precision);
  };
  real("auc", m.auc);
  real("csauc", m.csauc);
  real("gcsauc", m.gcsauc);
  real("gauc", m.gauc);
  real("copc", m.copc);
  real("ropr", m.ropr);
  key("n_samples");
  out << m.n_samples;
  key("n_positive");
  out << m.n_positive;
  key("n_groups");
  out << m.n_groups;
  key("reward_max");
  out << format_fixed(m.reward_max, precision);
  key("skipped_groups");
  out << m.skipped_groups;
  key("rows_rejected");
  out << report.ingest.rejected_total();
  key("rejected_by_category");
  out << '{';
  bool first_cat = true;
  for (const auto& [code, n] : report.ingest.rejected) {
    out << (first_cat ? "" : ",") << '"' << error_name(code) << "\":" << n;
    first_cat = false;
  }
  out << '}';
  if (report.include_per_group) {
    key("per_group");
    out << "{\"gcsauc\":";
    detail::write_group_list(out, report.per_group_gcsauc, precision);
    out << ",\"gauc\":";
    detail::write_group_list(out, report.per_group_gauc, precision);
    out << '}';
  }
  out << "}\n";
}

inline void write_text(const RunReport& report, std::ostream& out, int precision = kDefaultPrecision) {
  const auto& m = report.metrics;
  char line[640];
  auto row = [&](std::string_view name, const std::string& value) {
    std::snprintf(line, sizeof(line), "%-16.*s %s\n", static_cast<int>(name.size()), name.data(), value.c_str());
    out << line;
  };
  auto real = [&](std::string_view name, const std::optional<double>& v) {
    if (v) row(name, format_fixed(*v, precision));
  };
  real("auc", m.auc);
  real("csauc", m.csauc);
  real("gcsauc", m.gcsauc);
  real("gauc", m.gauc);
  real("copc", m.copc);
  real("ropr", m.ropr);
  row("n_samples", std::to_string(m.n_samples));
  row("n_positive", std::to_string(m.n_positive));
  row("n_groups", std::to_string(m.n_groups));
  row("reward_max", format_fixed(m.reward_max, precision));
  row("skipped_groups", std::to_string(m.skipped_groups));
  row("rows_rejected", std::to_string(report.ingest.rejected_total()));
  for (const auto& [code, n] : report.ingest.rejected) row("  " + std::string(error_name(code)), std::to_string(n));
  if (report.include_per_group) {
    auto list = [&](std::string_view title, const std::vector<GroupScore>& groups) {
      if (groups.empty()) return;
      out << '\n' << title << '\n';
      for (const auto& g : groups)
        row(g.key, (g.value ? format_fixed(*g.value, precision) : std::string("skipped")) +
                       "  weight=" + format_fixed(g.weight, precision) + "  size=" + std::to_string(g.size));
    };
    list("per-group gcsauc", report.per_group_gcsauc);
    list("per-group gauc", report.per_group_gauc);
  }
}

inline void write_report(const RunReport& report, ReportFormat format, std::ostream& out,
                         int precision = kDefaultPrecision) {
  if (format == ReportFormat::Json)
    write_json(report, out, precision);
  else
    write_text(report, out, precision);
}

}  // namespace csauc
