// Copyright 2026 The esslab Authors
//
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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "esslab/distributions.hpp"
#include "esslab/estimators.hpp"
#include "esslab/random.hpp"
#include "oracles/quadrature.hpp"

namespace {

using esslab::Density;
using esslab::Gaussian1D;
using esslab::Integrand;
using esslab::WeightedSampleSet;

constexpr double kInf = std::numeric_limits<double>::infinity();

const Gaussian1D kStd{0.0, 1.0};

TEST(Integrand, IndicatorIsStrict) {
  const auto h = Integrand::abs_greater_than(1.0);
  EXPECT_EQ(h(1.0), 0.0);
  EXPECT_EQ(h(-1.0), 0.0);
  EXPECT_EQ(h(1.0000001), 1.0);
  EXPECT_EQ(h(-2.0), 1.0);
  EXPECT_EQ(h(0.0), 0.0);
}

TEST(Integrand, Parse) {
  EXPECT_EQ(Integrand::parse("identity")(3.5), 3.5);
  EXPECT_EQ(Integrand::parse("abs-gt:1.5")(-2.0), 1.0);
  EXPECT_EQ(Integrand::parse("abs-gt:1.5")(1.4), 0.0);
  EXPECT_THROW(Integrand::parse("square"), std::invalid_argument);
  EXPECT_THROW(Integrand::parse("abs-gt:-1"), std::invalid_argument);
  EXPECT_THROW(Integrand::parse("abs-gt:x"), std::invalid_argument);
}

TEST(WeightedSampleSet, Validation) {
  EXPECT_THROW(WeightedSampleSet({}, {}), std::invalid_argument);
  EXPECT_THROW(WeightedSampleSet({1.0, 2.0}, {0.0}), std::invalid_argument);
  EXPECT_THROW(WeightedSampleSet({1.0, 2.0}, {-kInf, -kInf}), std::invalid_argument);
  EXPECT_NO_THROW(WeightedSampleSet({1.0, 2.0}, {0.0, -kInf}));
}

TEST(ComputeWeights, TargetEqualsProposalGivesZeroLogWeights) {
  const auto ws = esslab::compute_weights(kStd, kStd, {-2.0, 0.0, 0.3, 5.0});
  for (double lw : ws.log_weights()) {
    EXPECT_EQ(lw, 0.0);
  }
}

TEST(ComputeWeights, ScaledTargetGivesConstantLogWeights) {
  const auto ws = esslab::compute_weights(Density::scaled(kStd, std::log(2.0)), kStd, {-2.0, 0.0, 1.0});
  for (double lw : ws.log_weights()) {
    EXPECT_NEAR(lw, std::log(2.0), 1e-15);
  }
}

TEST(ComputeWeights, HandSubtraction) {
  const auto ws = esslab::compute_weights(kStd, Gaussian1D{1.0, 1.0}, {0.0});
  EXPECT_NEAR(ws.log_weights()[0], 0.5, 1e-15);
}

TEST(Normalize, Examples) {
  EXPECT_EQ(esslab::normalize(std::vector<double>{0, 0, 0, 0}), (std::vector<double>{0.25, 0.25, 0.25, 0.25}));
  EXPECT_EQ(esslab::normalize(std::vector<double>{0.0, -kInf}), (std::vector<double>{1.0, 0.0}));
  const auto w = esslab::normalize(std::vector<double>{std::log(2.0), std::log(2.0), std::log(4.0)});
  EXPECT_NEAR(w[0], 0.25, 1e-15);
  EXPECT_NEAR(w[1], 0.25, 1e-15);
  EXPECT_NEAR(w[2], 0.5, 1e-15);
}

TEST(Normalize, SurvivesSixHundredOrdersOfMagnitude) {
  // ln(10^600) ~ 1381.6
  const double span = 600.0 * std::log(10.0);
  std::vector<double> lw;
  for (int i = 0; i <= 1000; ++i) {
    lw.push_back(-span / 2.0 + span * i / 1000.0);
  }
  const auto w = esslab::normalize(lw);
  EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
  for (double x : w) {
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
}

TEST(Normalize, MeanNormalizedConvention) {
  const WeightedSampleSet ws{{0.0, 1.0, 2.0}, {0.0, std::log(2.0), std::log(5.0)}};
  const auto w = esslab::normalize(ws);
  const auto wbar = esslab::mean_normalized_weights(ws);
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_NEAR(wbar[i], 3.0 * w[i], 1e-15);
    total += wbar[i];
  }
  EXPECT_NEAR(total, 3.0, 1e-14);
  EXPECT_NEAR(wbar[2], 3.0 * 5.0 / 8.0, 1e-15);
}

TEST(LogZEstimate, IsLogMeanWeight) {
  EXPECT_NEAR(esslab::log_z_estimate(std::vector<double>{std::log(1.0), std::log(3.0)}), std::log(2.0), 1e-15);
}

TEST(UisEstimate, SymmetricCancellation) {
  const auto ws = esslab::compute_weights(kStd, kStd, {1.0, -1.0});
  EXPECT_EQ(esslab::uis_estimate(ws, Integrand::identity(), 1.0), 0.0);
}

TEST(UisEstimate, ConstantIntegrandGivesZHat) {
  const WeightedSampleSet ws{{0.0, 1.0, 2.0, 3.0}, {0.0, std::log(3.0), std::log(0.5), -kInf}};
  const auto one = Integrand::custom([](double) { return 1.0; }, "one");
  EXPECT_NEAR(esslab::uis_estimate(ws, one, 1.0), (1.0 + 3.0 + 0.5) / 4.0, 1e-15);
  EXPECT_NEAR(esslab::uis_estimate(ws, one, 2.0), (1.0 + 3.0 + 0.5) / 8.0, 1e-15);
}

TEST(UisEstimate, UnbiasedOverReplicates) {
  const Gaussian1D proposal{1.0, 1.0};
  const auto one = Integrand::custom([](double) { return 1.0; }, "one");
  constexpr int kReplicates = 10000;
  double sum = 0.0;
  double sum_sq = 0.0;
  double z_sum = 0.0;
  for (int r = 0; r < kReplicates; ++r) {
    esslab::RandomStream rng{esslab::derive_seed(77, {static_cast<std::uint64_t>(r)})};
    const auto ws = esslab::compute_weights(kStd, proposal, esslab::sample(proposal, rng, 10));
    const double est = esslab::uis_estimate(ws, Integrand::identity(), 1.0);
    sum += est;
    sum_sq += est * est;
    z_sum += esslab::uis_estimate(ws, one, 1.0);
  }
  const double mean = sum / kReplicates;
  const double se = std::sqrt((sum_sq / kReplicates - mean * mean) / (kReplicates - 1));
  EXPECT_NEAR(mean, 0.0, 3.0 * se);
  // Var_q[W] = e - 1, so the Z-hat mean has SE sqrt((e - 1) / (10 R)).
  EXPECT_NEAR(z_sum / kReplicates, 1.0, 3.0 * std::sqrt((std::exp(1.0) - 1.0) / (10.0 * kReplicates)));
}

TEST(SnisEstimate, Examples) {
  EXPECT_EQ(esslab::snis_estimate(WeightedSampleSet{{3.0, 100.0}, {0.0, -kInf}}, Integrand::identity()), 3.0);
  EXPECT_NEAR(esslab::snis_estimate(WeightedSampleSet{{0.0, 1.0}, {0.0, std::log(3.0)}}, Integrand::identity()), 0.75,
              1e-15);
}

TEST(SnisEstimate, ShiftInvariance) {
  esslab::RandomStream rng{5};
  const Gaussian1D proposal{0.7, 1.5};
  const auto ws = esslab::compute_weights(kStd, proposal, esslab::sample(proposal, rng, 200));
  const double base = esslab::snis_estimate(ws, Integrand::identity());
  for (double c = -50.0; c <= 50.0; c += 12.5) {
    std::vector<double> shifted(ws.log_weights().begin(), ws.log_weights().end());
    for (double& lw : shifted) {
      lw += c;
    }
    const WeightedSampleSet moved{std::vector<double>(ws.samples().begin(), ws.samples().end()), shifted};
    EXPECT_NEAR(esslab::snis_estimate(moved, Integrand::identity()), base, 1e-12) << "c=" << c;
  }
}

TEST(SnisEstimate, EqualsRawMonteCarloWhenTargetIsProposal) {
  esslab::RandomStream rng{6};
  const auto xs = esslab::sample(kStd, rng, 1001);
  const auto ws = esslab::compute_weights(kStd, kStd, xs);
  for (const auto& h : {Integrand::identity(), Integrand::abs_greater_than(0.8)}) {
    EXPECT_EQ(esslab::snis_estimate(ws, h), esslab::raw_mc_estimate(xs, h));
  }
}

TEST(RawMcEstimate, Examples) {
  const auto c = Integrand::custom([](double) { return 2.5; });
  EXPECT_EQ(esslab::raw_mc_estimate(std::vector<double>{1.0, -4.0, 9.0}, c), 2.5);
  const auto sq = Integrand::custom([](double x) { return x * x; });
  EXPECT_EQ(esslab::raw_mc_estimate(std::vector<double>{-1.0, 1.0}, sq), 1.0);
}

TEST(RawMcEstimate, GaussianTail) {
  esslab::RandomStream rng{8};
  const auto xs = esslab::sample(kStd, rng, 1000000);
  const double p = esslab::oracle::two_sided_tail(1.96);
  const double se = std::sqrt(p * (1.0 - p) / 1e6);
  EXPECT_NEAR(esslab::raw_mc_estimate(xs, Integrand::abs_greater_than(1.96)), p, 3.0 * se);
}

}  // namespace
