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

// csauc: offline evaluation of CTR predictions.
//
//   csauc eval   --input FILE [--metrics auc,csauc,...] ...
//   csauc oracle --input FILE ...          quadratic reference, small inputs
//   csauc gen    --output FILE --n N ...   synthetic impression log
//   csauc bench  --sizes 1000,2000 ...     DP vs oracle timing table (CSV)
//
// Failures print {"error":"<Name>","message":"..."} on stderr and exit 2.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csauc/csauc.hpp"

namespace {

struct EvalFlags {
  std::string input = "-";
  std::string format;
  bool no_header = false;
  std::string metrics = "auc,csauc,copc,ropr";
  std::string group_key = "group";
  std::string group_weight = "rewardmax";
  std::size_t min_group_size = 2;
  std::string tie_policy = "half";
  std::size_t pcpm_buckets = csauc::kDefaultPcpmBuckets;
  std::string bid_buckets = "exact";
  bool strict = false;
  bool per_group = false;
  bool compensated = false;
  int precision = csauc::kDefaultPrecision;
  std::string report_format = "json";
  std::uint64_t cap = csauc::oracle::kDefaultCap;
  bool force = false;
};

void add_eval_flags(CLI::App* cmd, EvalFlags& f, bool oracle_mode) {
  cmd->add_option("--input,-i", f.input, "Input file, or - for standard input")->required();
  cmd->add_option("--format", f.format, "Input format (default: from extension)")
      ->check(CLI::IsMember({"csv", "tsv", "jsonl"}));
  cmd->add_flag("--no-header", f.no_header, "CSV/TSV input has no header row (columns label,bid,pctr[,group])");
  cmd->add_option("--metrics", f.metrics, "Comma-separated: auc,csauc,gcsauc,gauc,copc,ropr");
  cmd->add_option("--group-key", f.group_key, "Column / key holding the group id");
  cmd->add_option("--group-weight", f.group_weight, "Group weighting")
      ->check(CLI::IsMember({"rewardmax", "count", "uniform"}));
  cmd->add_option("--min-group-size", f.min_group_size, "Groups smaller than this are skipped");
  cmd->add_option("--tie-policy", f.tie_policy, "Payment for pCPM ties")->check(CLI::IsMember({"half", "full"}));
  cmd->add_option("--pcpm-buckets", f.pcpm_buckets, "Number of normalized pCPM buckets")
      ->check(CLI::Range(std::size_t{1}, std::size_t{4294967295u}));
  cmd->add_option("--bid-buckets", f.bid_buckets, "exact | width:W | quantile:K");
  cmd->add_flag("--strict", f.strict, "Abort on the first malformed row");
  cmd->add_flag("--per-group", f.per_group, "Emit the per-group breakdown");
  cmd->add_flag("--compensated", f.compensated, "Compensated summation in the DP");
  cmd->add_option("--precision", f.precision, "Decimals in the report")->check(CLI::Range(0, 17));
  cmd->add_option("--report-format", f.report_format, "Report format")->check(CLI::IsMember({"json", "text"}));
  if (oracle_mode) {
    cmd->add_option("--cap", f.cap, "Maximum input size for the quadratic oracle");
    cmd->add_flag("--force", f.force, "Run the oracle above the size cap");
  }
}

csauc::InputSpec input_spec(const EvalFlags& f) {
  csauc::InputSpec spec;
  spec.path = f.input;
  spec.format = f.format.empty() ? csauc::infer_input_format(f.input) : csauc::parse_input_format(f.format);
  spec.has_header = !f.no_header;
  spec.columns.group = f.group_key;
  spec.strict = f.strict;
  return spec;
}

csauc::EvalOptions eval_options(const EvalFlags& f) {
  csauc::EvalOptions opt;
  opt.metrics = csauc::MetricSet::parse(f.metrics);
  opt.tie = f.tie_policy == "full" ? csauc::TiePolicy::FullCredit : csauc::TiePolicy::HalfCredit;
  opt.bucketing.bids = csauc::BidQuantization::parse(f.bid_buckets);
  opt.bucketing.pcpm_buckets = f.pcpm_buckets;
  opt.group_policy.weight = csauc::parse_group_weight(f.group_weight);
  opt.group_policy.min_group_size = f.min_group_size;
  opt.summation = f.compensated ? csauc::Summation::Compensated : csauc::Summation::Plain;
  opt.threads = csauc::detail::threads_from_env();
  opt.per_group = f.per_group;
  return opt;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) {
    T value{};
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || p != item.data() + item.size() || value == 0)
      throw csauc::Error(csauc::ErrorCode::InvalidArgument, std::string(what) + " '" + item + "'");
    out.push_back(value);
  }
  return out;
}

void print_error(const std::string& name, const std::string& message) {
  std::cerr << "{\"error\":" << csauc::json_string(name) << ",\"message\":" << csauc::json_string(message)
            << "}\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline evaluation of CTR predictions: AUC, CPM-sensitive AUC, grouped variants, COPC, ROPR"};
  app.require_subcommand(1);

  EvalFlags eval_flags;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate predictions with the bucketed DP");
  add_eval_flags(eval_cmd, eval_flags, false);

  EvalFlags oracle_flags;
  auto* oracle_cmd = app.add_subcommand("oracle", "Evaluate predictions with the quadratic reference");
  add_eval_flags(oracle_cmd, oracle_flags, true);

  csauc::GeneratorConfig gen;
  std::string gen_output = "-";
  auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic impression log as CSV");
  gen_cmd->add_option("--output,-o", gen_output, "Output file, or - for standard output");
  gen_cmd->add_option("--n", gen.n, "Number of samples");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--campaigns", gen.campaigns, "Number of campaigns");
  gen_cmd->add_option("--max-bid", gen.max_bid, "Campaign bids are integers in [1, max-bid]");
  gen_cmd->add_option("--base-ctr", gen.base_ctr, "Median campaign CTR");
  gen_cmd->add_option("--ctr-spread", gen.ctr_spread, "Campaign CTR spread (logit sd)");
  gen_cmd->add_option("--noise", gen.noise, "Prediction noise (logit sd)");
  gen_cmd->add_option("--groups", gen.groups, "Number of groups (0: no group column)");

  csauc::BenchConfig bench;
  std::string bench_sizes = "10000,20000,40000";
  std::string bench_levels = "16";
  std::string bench_buckets = std::to_string(csauc::kDefaultPcpmBuckets);
  std::string bench_output = "-";
  auto* bench_cmd = app.add_subcommand("bench", "Time the DP against the quadratic oracle");
  bench_cmd->add_option("--sizes", bench_sizes, "Comma-separated sample counts");
  bench_cmd->add_option("--levels", bench_levels, "Comma-separated first-level bucket counts");
  bench_cmd->add_option("--buckets", bench_buckets, "Comma-separated pCPM bucket counts");
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  bench_cmd->add_option("--runs", bench.runs, "Repetitions per configuration (median reported)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--oracle-cap", bench.oracle_cap, "Largest n timed with the oracle");
  bench_cmd->add_option("--output,-o", bench_output, "CSV output file, or - for standard output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval_cmd || *oracle_cmd) {
      const bool oracle_mode = static_cast<bool>(*oracle_cmd);
      const EvalFlags& f = oracle_mode ? oracle_flags : eval_flags;
      const auto options = eval_options(f);
      csauc::SampleSource source(input_spec(f));
      const auto report = oracle_mode ? csauc::evaluate_oracle(source, options, f.cap, f.force)
                                      : csauc::evaluate(source, options);
      csauc::write_report(report, csauc::parse_report_format(f.report_format), std::cout, f.precision);
      return 0;
    }
    if (*gen_cmd) {
      gen.validate();
      if (gen_output == "-") {
        csauc::write_generated_csv(gen, std::cout);
      } else {
        std::ofstream out(gen_output, std::ios::binary);
        if (!out) throw csauc::Error(csauc::ErrorCode::InvalidArgument, "cannot write " + gen_output);
        csauc::write_generated_csv(gen, out);
      }
      return 0;
    }
    if (*bench_cmd) {
      bench.sizes = parse_list<std::uint64_t>(bench_sizes, "size");
      bench.levels = parse_list<std::size_t>(bench_levels, "levels");
      bench.buckets = parse_list<std::size_t>(bench_buckets, "buckets");
      const auto rows = csauc::bench_scaling(bench);
      if (bench_output == "-") {
        csauc::write_bench_csv(rows, std::cout);
      } else {
        std::ofstream out(bench_output);
        if (!out) throw csauc::Error(csauc::ErrorCode::InvalidArgument, "cannot write " + bench_output);
        csauc::write_bench_csv(rows, out);
      }
      for (const auto& r : rows) {
        if (!r.agrees()) {
          print_error("OracleMismatch", "dp and oracle disagree at n=" + std::to_string(r.n));
          return 3;
        }
      }
      return 0;
    }
  } catch (const csauc::Error& e) {
    print_error(std::string(csauc::error_name(e.code())), e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error("InternalError", e.what());
    return 1;
  }
  return 0;
}
