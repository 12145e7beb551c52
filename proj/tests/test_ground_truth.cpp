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
#include <cstring>
#include <sstream>

#include "esslab/csv.hpp"
#include "esslab/errors.hpp"
#include "esslab/ground_truth.hpp"
#include "oracles/quadrature.hpp"

namespace {

using esslab::Gaussian1D;
using esslab::GroundTruth;
using esslab::Integrand;
using esslab::ReplicationPlan;

ReplicationPlan plan_for(double mu_q, std::size_t n, std::size_t r, std::uint64_t seed) {
  return ReplicationPlan{
      .target = Gaussian1D{0.0, 1.0},
      .proposal = esslab::Density{Gaussian1D{mu_q, 1.0}},
      .integrand = Integrand::identity(),
      .n_per_run = n,
      .replicates = r,
      .true_value = 0.0,
      .master_seed = seed,
      .workers = 1,
  };
}

bool bitwise_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

TEST(ReplicationPlan, Validation) {
  auto p = plan_for(0.0, 4, 1, 1);
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.replicates = 2;
  p.n_per_run = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(RunReplication, PerfectProposal) {
  const auto gt = esslab::run_replication(plan_for(0.0, 32, 20000, 1));
  EXPECT_NEAR(gt.ess / 32.0, 1.0, 3.0 * gt.std_errors.ess / 32.0);
  EXPECT_EQ(gt.ess_hat_mean, 32.0);
  EXPECT_EQ(gt.ess_hat_sd, 0.0);
  EXPECT_NEAR(gt.var_raw, 1.0 / 32.0, 3.0 * gt.std_errors.var_raw);
}

TEST(RunReplication, SingleSampleShowsBiasOnlyInMse) {
  for (double mu : {1.0, 2.0}) {
    const auto gt = esslab::run_replication(plan_for(mu, 1, 40000, 2));
    EXPECT_NEAR(gt.var_raw, 1.0, 3.0 * gt.std_errors.var_raw);
    EXPECT_NEAR(gt.var_snis, 1.0, 3.0 * gt.std_errors.var_snis);
    EXPECT_NEAR(gt.ess, 1.0, 3.0 * gt.std_errors.ess);
    EXPECT_NEAR(gt.bias_snis, mu, 3.0 * gt.std_errors.bias_snis);
    EXPECT_NEAR(gt.ess_star, 1.0 / (1.0 + mu * mu), 3.0 * gt.std_errors.ess_star);
    EXPECT_EQ(gt.ess_hat_mean, 1.0);
  }
}

TEST(RunReplication, BernoulliRawVariance) {
  for (double alpha : {0.5, 1.5, 2.5}) {
    const double p = esslab::oracle::two_sided_tail(alpha);
    const ReplicationPlan plan{
        .target = Gaussian1D{0.0, 1.0},
        .proposal = esslab::Density{Gaussian1D{0.0, 1.0}},
        .integrand = Integrand::abs_greater_than(alpha),
        .n_per_run = 50,
        .replicates = 20000,
        .true_value = p,
        .master_seed = 3,
        .workers = 1,
    };
    const auto gt = esslab::run_replication(plan);
    EXPECT_NEAR(gt.var_raw, p * (1.0 - p) / 50.0, 3.0 * gt.std_errors.var_raw) << "alpha " << alpha;
    EXPECT_NEAR(esslab::rrmse(gt, p), std::sqrt((1.0 - p) / (50.0 * p)),
                0.05 * std::sqrt((1.0 - p) / (50.0 * p)));
  }
}

TEST(RunReplication, MseDecomposesIntoVarianceAndBias) {
  const auto gt = esslab::run_replication(plan_for(1.5, 8, 5000, 4));
  const double r = static_cast<double>(gt.replicates);
  // Unbiased variance carries the R / (R - 1) factor that the plain-mean MSE does not.
  EXPECT_NEAR(gt.mse_snis, gt.var_snis * (r - 1.0) / r + gt.bias_snis * gt.bias_snis, 1e-9 * gt.mse_snis);
  EXPECT_LE(gt.ess_star, gt.ess * (1.0 + 1e-12));
  EXPECT_NEAR(gt.ess, 8.0 * gt.var_raw / gt.var_snis, 1e-12 * gt.ess);
  EXPECT_NEAR(gt.ess_star, 8.0 * gt.var_raw / gt.mse_snis, 1e-12 * gt.ess_star);
}

TEST(RunReplication, BitIdenticalAcrossWorkerCounts) {
  auto plan = plan_for(1.0, 16, 3001, 5);
  const auto one = esslab::run_replication(plan);
  plan.workers = 3;
  const auto three = esslab::run_replication(plan);
  plan.workers = 8;
  const auto eight = esslab::run_replication(plan);
  for (const GroundTruth* other : {&three, &eight}) {
    EXPECT_TRUE(bitwise_equal(one.var_raw, other->var_raw));
    EXPECT_TRUE(bitwise_equal(one.var_snis, other->var_snis));
    EXPECT_TRUE(bitwise_equal(one.mse_snis, other->mse_snis));
    EXPECT_TRUE(bitwise_equal(one.ess, other->ess));
    EXPECT_TRUE(bitwise_equal(one.ess_star, other->ess_star));
    EXPECT_TRUE(bitwise_equal(one.ess_hat_mean, other->ess_hat_mean));
    EXPECT_TRUE(bitwise_equal(one.std_errors.ess, other->std_errors.ess));
  }
}

TEST(RunReplication, ZeroVarianceIsAnError) {
  const ReplicationPlan plan{
      .target = Gaussian1D{0.0, 1.0},
      .proposal = esslab::Density{Gaussian1D{0.0, 1.0}},
      .integrand = Integrand::custom([](double) { return 1.0; }),
      .n_per_run = 4,
      .replicates = 10,
      .true_value = 1.0,
      .master_seed = 6,
      .workers = 1,
  };
  EXPECT_THROW(esslab::run_replication(plan), esslab::ReplicationError);
}

TEST(Rrmse, ZeroMseAndZeroTruth) {
  GroundTruth gt{};
  gt.mse_snis = 0.0;
  EXPECT_EQ(esslab::rrmse(gt, 0.3), 0.0);
  gt.mse_snis = 0.04;
  EXPECT_NEAR(esslab::rrmse(gt, -0.5), 0.4, 1e-15);
  EXPECT_THROW(esslab::rrmse(gt, 0.0), std::invalid_argument);
}

TEST(Rrmse, IncreasesWithAlpha) {
  double previous = 0.0;
  for (double alpha = 0.5; alpha <= 3.5 + 1e-9; alpha += 0.5) {
    const double p = esslab::oracle::two_sided_tail(alpha);
    const ReplicationPlan plan{
        .target = Gaussian1D{0.0, 1.0},
        .proposal = esslab::Density{Gaussian1D{0.0, 1.0}},
        .integrand = Integrand::abs_greater_than(alpha),
        .n_per_run = 100,
        .replicates = 5000,
        .true_value = p,
        .master_seed = 7,
        .workers = 1,
    };
    const double value = esslab::rrmse(esslab::run_replication(plan), p);
    EXPECT_GT(value, previous) << "alpha " << alpha;
    previous = value;
  }
}

TEST(GroundTruthCsv, RowMatchesColumns) {
  const auto gt = esslab::run_replication(plan_for(0.5, 4, 200, 8));
  const auto row = esslab::csv::ground_truth_row(gt);
  ASSERT_EQ(row.size(), esslab::csv::ground_truth_columns().size());
  std::ostringstream out;
  esslab::csv::Writer writer{out};
  writer.header(esslab::csv::ground_truth_columns());
  writer.row(row);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "n,replicates,var_raw,var_snis,mse_snis,bias_snis,ess,ess_star,se_ess");
}

}  // namespace
