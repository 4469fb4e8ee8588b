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

// Synthetic impression logs for tests and benchmarks.
//
// Each campaign has an integer bid and a true CTR (logit-normal around
// base_ctr). An impression picks a campaign uniformly, draws its click from
// the true CTR, and gets a prediction sigmoid(logit(ctr) + noise * N(0,1)).
// Labels, noise and group ids come from separate engines, so changing the
// noise level leaves campaigns and clicks untouched.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "csauc/model.hpp"

namespace csauc {

struct GeneratorConfig {
  std::uint64_t n = 1000;
  std::uint64_t seed = 42;
  std::size_t campaigns = 64;
  std::uint32_t max_bid = 100;  // campaign bids are uniform integers in [1, max_bid]
  double base_ctr = 0.05;
  double ctr_spread = 1.0;  // sd of campaign CTR on the logit scale
  double noise = 0.3;       // sd of prediction noise on the logit scale
  std::size_t groups = 0;   // 0 = no group column

  void validate() const {
    auto bad = [](const std::string& what) { return Error(ErrorCode::InvalidArgument, what); };
    if (campaigns == 0) throw bad("campaigns must be positive");
    if (max_bid == 0) throw bad("max bid must be positive");
    if (!(base_ctr > 0.0 && base_ctr < 1.0)) throw bad("base ctr must lie in (0, 1)");
    if (!(ctr_spread >= 0.0) || !std::isfinite(ctr_spread)) throw bad("ctr spread must be >= 0");
    if (!(noise >= 0.0) || !std::isfinite(noise)) throw bad("noise must be >= 0");
  }
};

class SampleGenerator {
 public:
  struct Campaign {
    double bid = 0.0;
    double ctr = 0.0;
  };

  explicit SampleGenerator(const GeneratorConfig& config)
      : config_(validated(config)),
        pick_rng_(seed_for(config.seed, 1)),
        noise_rng_(seed_for(config.seed, 2)),
        group_rng_(seed_for(config.seed, 3)) {
    std::mt19937_64 campaign_rng(seed_for(config.seed, 0));
    std::uniform_int_distribution<std::uint32_t> bid_dist(1, config.max_bid);
    std::normal_distribution<double> logit_dist(logit(config.base_ctr), config.ctr_spread);
    campaigns_.reserve(config.campaigns);
    for (std::size_t c = 0; c < config.campaigns; ++c) {
      const double bid = static_cast<double>(bid_dist(campaign_rng));
      const double ctr = sigmoid(logit_dist(campaign_rng));
      campaigns_.push_back({bid, ctr});
    }
  }

  const std::vector<Campaign>& campaigns() const noexcept { return campaigns_; }

  Sample next() {
    const auto& c = campaigns_[pick_(pick_rng_)];
    Sample s;
    s.bid = c.bid;
    s.label = unit_(pick_rng_) < c.ctr ? 1 : 0;
    s.pctr = config_.noise > 0.0 ? sigmoid(logit(c.ctr) + config_.noise * gauss_(noise_rng_)) : c.ctr;
    if (config_.groups > 0) s.group_key = "g" + std::to_string(group_pick_(group_rng_));
    return s;
  }

 private:
  static std::seed_seq::result_type low32(std::uint64_t x) {
    return static_cast<std::seed_seq::result_type>(x & 0xffffffffu);
  }
  static std::mt19937_64 seed_for(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{low32(seed), low32(seed >> 32), stream};
    return std::mt19937_64(seq);
  }
  static const GeneratorConfig& validated(const GeneratorConfig& c) {
    c.validate();
    return c;
  }
  static double logit(double p) { return std::log(p / (1.0 - p)); }
  static double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

  GeneratorConfig config_;
  std::vector<Campaign> campaigns_;
  std::mt19937_64 pick_rng_;
  std::mt19937_64 noise_rng_;
  std::mt19937_64 group_rng_;
  std::uniform_int_distribution<std::size_t> pick_{0, config_.campaigns - 1};
  std::uniform_int_distribution<std::size_t> group_pick_{0, config_.groups == 0 ? 0 : config_.groups - 1};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

inline std::vector<Sample> generate_samples(const GeneratorConfig& config) {
  SampleGenerator gen(config);
  std::vector<Sample> out;
  out.reserve(config.n);
  for (std::uint64_t i = 0; i < config.n; ++i) out.push_back(gen.next());
  return out;
}

/// Writes `config.n` samples as CSV with a header line. Numbers use the
/// shortest round-trip representation, so the file reproduces the samples
/// exactly and identical configs give identical bytes.
inline void write_generated_csv(const GeneratorConfig& config, std::ostream& out) {
  SampleGenerator gen(config);
  out << (config.groups > 0 ? "label,bid,pctr,group\n" : "label,bid,pctr\n");
  std::string buffer;
  buffer.reserve(1 << 20);
  char num[64];
  auto append = [&](double v) {
    auto [p, ec] = std::to_chars(num, num + sizeof(num), v);
    buffer.append(num, p);
  };
  for (std::uint64_t i = 0; i < config.n; ++i) {
    const Sample s = gen.next();
    buffer.push_back(s.label ? '1' : '0');
    buffer.push_back(',');
    append(s.bid);
    buffer.push_back(',');
    append(s.pctr);
    if (s.group_key) {
      buffer.push_back(',');
      buffer.append(*s.group_key);
    }
    buffer.push_back('\n');
    if (buffer.size() >= (1 << 20) - 256) {
      out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      buffer.clear();
    }
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
}

}  // namespace csauc
