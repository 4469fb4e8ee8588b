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

#include <random>
#include <sstream>

#include "csauc/evaluate.hpp"
#include "fixtures.hpp"
#include "gtest/gtest.h"

namespace csauc {
namespace {

std::string csv_of(const std::vector<Sample>& samples) {
  std::ostringstream out;
  out << "label,bid,pctr,group\n";
  out.precision(17);
  for (const auto& s : samples) out << s.label << ',' << s.bid << ',' << s.pctr << ',' << s.group_key.value_or("") << '\n';
  return out.str();
}

RunReport run(const std::string& text, const EvalOptions& options, bool oracle_mode = false) {
  std::istringstream in(text);
  SampleSource source(InputSpec{}, in);
  return oracle_mode ? evaluate_oracle(source, options) : evaluate(source, options);
}

TEST(Evaluate, WorkedExample) {
  const auto text = csv_of(testing::demo_samples(0, "a"));
  auto report = run(text, {});
  const auto& m = report.metrics;
  ASSERT_TRUE(m.csauc && m.auc && m.copc && m.ropr);
  EXPECT_DOUBLE_EQ(*m.csauc, 125.0 / 420.0);
  EXPECT_EQ(m.reward_max, 420.0);
  EXPECT_EQ(m.n_samples, 5u);
  EXPECT_EQ(m.n_positive, 4u);
  EXPECT_FALSE(m.gcsauc);
  auto oracle_report = run(text, {}, true);
  EXPECT_EQ(*oracle_report.metrics.csauc, *m.csauc);
  EXPECT_EQ(*oracle_report.metrics.auc, *m.auc);
  EXPECT_NEAR(*oracle_report.metrics.ropr, *m.ropr, 1e-15);
}

TEST(Evaluate, MatchesInMemoryFunctions) {
  std::mt19937_64 rng(41);
  EvalOptions options;
  options.metrics = MetricSet::parse("auc,csauc,gcsauc,gauc,copc,ropr");
  options.threads = 3;
  int compared = 0;
  for (int round = 0; round < 60; ++round) {
    auto samples = testing::random_dataset(rng, {.tie_heavy = round % 2 == 0, .with_groups = true, .groups = 3});
    RunReport report;
    try {
      report = run(csv_of(samples), options);
    } catch (const Error&) {
      continue;
    }
    const auto& m = report.metrics;
    EXPECT_EQ(*m.csauc, csauc(samples).csauc);
    EXPECT_EQ(*m.auc, auc_rank(samples));
    EXPECT_EQ(*m.gcsauc, gcsauc(samples).value);
    EXPECT_EQ(*m.gauc, gauc(samples).value);
    EXPECT_EQ(*m.copc, copc(samples));
    EXPECT_EQ(*m.ropr, ropr(samples));
    const auto exact = run(csv_of(samples), options, true).metrics;
    // coarse pctr values never share a bucket unless equal
    EXPECT_NEAR(*exact.csauc, *m.csauc, round % 2 == 0 ? 1e-12 : 1e-3);
    EXPECT_EQ(*exact.auc, *m.auc);
    ++compared;
  }
  EXPECT_GT(compared, 30);
}

TEST(Evaluate, MetricSelection) {
  EvalOptions options;
  options.metrics = MetricSet::parse("copc,ropr");
  auto report = run(csv_of(testing::demo_samples(0)), options);
  EXPECT_FALSE(report.metrics.auc);
  EXPECT_FALSE(report.metrics.csauc);
  EXPECT_TRUE(report.metrics.copc);
  EXPECT_THROW(MetricSet::parse("auc,nope"), Error);
}

TEST(Evaluate, ErrorsAndPerGroup) {
  EvalOptions options;
  try {
    run("label,bid,pctr\n", options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
  }
  options.metrics = MetricSet::parse("gcsauc");
  try {
    run(csv_of(testing::demo_samples(0)), options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingGroupKey);
  }
  options.per_group = true;
  auto samples = testing::demo_samples(0, "a");
  for (const auto& s : testing::demo_samples(1, "b")) samples.push_back(s);
  auto report = run(csv_of(samples), options);
  EXPECT_NEAR(*report.metrics.gcsauc, 545.0 / 840.0, 1e-12);
  EXPECT_TRUE(report.include_per_group);
  ASSERT_EQ(report.per_group_gcsauc.size(), 2u);
  std::ostringstream json;
  write_json(report, json);
  EXPECT_NE(json.str().find("\"per_group\""), std::string::npos);
}

TEST(Evaluate, OracleCap) {
  EvalOptions options;
  std::istringstream in(csv_of(testing::demo_samples(0)));
  SampleSource source(InputSpec{}, in);
  try {
    evaluate_oracle(source, options, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InputTooLarge);
  }
}

TEST(Evaluate, ReportsRejectedRows) {
  auto report = run("label,bid,pctr\n1,2,0.5\n2,1,0.1\n0,-1,0.3\n0,3,0.1\n", {});
  EXPECT_EQ(report.ingest.rejected_total(), 2u);
  EXPECT_EQ(report.metrics.n_samples, 2u);
  std::ostringstream json;
  write_json(report, json);
  EXPECT_NE(json.str().find("\"NonBinaryLabel\":1"), std::string::npos);
  EXPECT_NE(json.str().find("\"NonPositiveBid\":1"), std::string::npos);
}

}  // namespace
}  // namespace csauc
