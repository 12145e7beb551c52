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
#include <sstream>
#include <string>

#include "esslab/csv.hpp"
#include "esslab/errors.hpp"
#include "esslab/experiments.hpp"
#include "oracles/quadrature.hpp"

namespace {

using esslab::ExperimentConfig;
using esslab::ExperimentId;
using esslab::Grid;

ExperimentConfig small(ExperimentId id, const std::string& grid, std::size_t n, std::size_t r) {
  auto cfg = ExperimentConfig::defaults(id);
  if (!grid.empty()) {
    cfg.grid = Grid::parse(grid);
  }
  cfg.n_values = {n};
  cfg.replicates = r;
  cfg.workers = 1;
  return cfg;
}

std::string run_to_string(const ExperimentConfig& cfg) {
  std::ostringstream out;
  esslab::run_experiment(cfg, out);
  return out.str();
}

TEST(Grid, ParseAndValues) {
  const auto g = Grid::parse("0:3:0.1");
  const auto v = g.values();
  ASSERT_EQ(v.size(), 31u);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_NEAR(v.back(), 3.0, 1e-12);
  EXPECT_EQ(Grid::parse("0.5:3.5:0.25").values().size(), 13u);
  EXPECT_EQ(Grid::parse("2:2:1").values(), std::vector<double>{2.0});
  EXPECT_THROW(Grid::parse("1:2"), std::invalid_argument);
  EXPECT_THROW(Grid::parse("1:2:0"), std::invalid_argument);
  EXPECT_THROW(Grid::parse("3:2:1"), std::invalid_argument);
  EXPECT_THROW(Grid::parse("a:2:1"), std::invalid_argument);
}

TEST(ExperimentConfig, DefaultsAndValidation) {
  EXPECT_EQ(ExperimentConfig::defaults(ExperimentId::kMeanMismatch).n_values, (std::vector<std::size_t>{4, 16, 256}));
  const auto mis = ExperimentConfig::defaults(ExperimentId::kMisScenario);
  ASSERT_EQ(mis.n_values.size(), 10u);
  EXPECT_EQ(mis.n_values.front(), 3u);
  EXPECT_EQ(mis.n_values.back(), 3u * 512u);
  auto bad = mis;
  bad.scenario = 4;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  for (const char* name : {"mean-mismatch", "var-mismatch", "rare-event", "mis-scenario"}) {
    EXPECT_EQ(esslab::to_string(esslab::parse_experiment_id(name)), name);
  }
}

TEST(Experiments, CsvIsDeterministic) {
  const auto cfg = small(ExperimentId::kMeanMismatch, "0:1:0.5", 8, 400);
  const std::string a = run_to_string(cfg);
  const std::string b = run_to_string(cfg);
  EXPECT_EQ(a, b);
  auto threaded = cfg;
  threaded.workers = 3;
  EXPECT_EQ(run_to_string(threaded), a);
  EXPECT_EQ(a.rfind("# experiment=mean-mismatch\n", 0), 0u);
  EXPECT_EQ(a.find('\r'), std::string::npos);
}

TEST(Experiments, MeanMismatchRows) {
  const auto rows = esslab::run_mean_mismatch(small(ExperimentId::kMeanMismatch, "0:2:1", 64, 4000));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[0].ess_over_n, 1.0, 3.0 * rows[0].truth.std_errors.ess / 64.0);
  EXPECT_EQ(rows[0].ess_hat_over_n, 1.0);
  EXPECT_NEAR(*rows[1].delta_chain_over_n, std::exp(-1.0), 1e-12);
  EXPECT_GT(rows[2].ratio_hat_to_ess, 1.0);
  for (const auto& r : rows) {
    EXPECT_GE(r.ess_hat_over_n, 1.0 / 64.0);
    EXPECT_LE(r.ess_hat_over_n, 1.0);
  }
}

TEST(Experiments, VarMismatchFlagsDivergence) {
  const auto rows = esslab::run_var_mismatch(small(ExperimentId::kVarMismatch, "0.6:1.0:0.4", 16, 1000));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].divergent);
  EXPECT_FALSE(rows[0].delta_chain_over_n.has_value());
  EXPECT_FALSE(rows[1].divergent);
  EXPECT_NEAR(*rows[1].delta_chain_over_n, 1.0, 1e-12);
  EXPECT_NEAR(rows[1].ess_over_n, 1.0, 3.0 * rows[1].truth.std_errors.ess / 16.0);

  // sigma_q^2 = 2: Var_q[W] = 2 / sqrt(3) - 1.
  const auto wide = esslab::run_var_mismatch(small(ExperimentId::kVarMismatch, "1.4142135623730951:1.5:1", 16, 200));
  EXPECT_NEAR(*wide[0].delta_chain_over_n, 1.0 / (2.0 / std::sqrt(3.0)), 1e-12);
}

TEST(Experiments, RareEventRows) {
  const auto rows = esslab::run_rare_event(small(ExperimentId::kRareEvent, "1:3:1", 200, 3000));
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.ess_hat_over_n, 1.0);
    EXPECT_NEAR(r.true_value, esslab::oracle::two_sided_tail(r.alpha), 1e-15);
    EXPECT_NEAR(r.var_analytic, r.true_value * (1.0 - r.true_value) / 200.0, 1e-18);
    EXPECT_NEAR(r.variance_over_value, r.truth.var_snis / r.true_value, 1e-15);
  }
  EXPECT_GT(rows[2].rrmse, rows[0].rrmse);
}

TEST(Experiments, MisScenarioRows) {
  auto cfg = small(ExperimentId::kMisScenario, "", 96, 500);
  const auto rows = esslab::run_mis_scenario(cfg);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    if (r.scheme != esslab::MisKind::kN1) {
      EXPECT_EQ(r.ess_hat_over_n, 1.0);
    }
    EXPECT_NEAR(r.ess_mis_over_n, 1.0 / (1.0 + r.truth.var_zhat), 1e-15);
  }
  std::ostringstream out;
  esslab::write_csv(out, cfg, rows);
  EXPECT_NE(out.str().find("\n1,N3,96,"), std::string::npos);
}

TEST(Diagnose, ConstantWeights) {
  std::istringstream in{"x,log_w\n0.1,0\n0.2,0\n-1,0\n3,0\n"};
  const auto report = esslab::diagnose(in);
  EXPECT_EQ(report.n, 4u);
  EXPECT_EQ(report.ess_hat, 4.0);
}

TEST(Diagnose, OneFiniteWeight) {
  std::istringstream in{"# comment\nx,log_w\n0.1,-inf\n0.2,1.5\n\n-1,-inf\n3,-inf\n"};
  EXPECT_EQ(esslab::diagnose(in).ess_hat, 1.0);
}

TEST(Diagnose, RoundTripMatchesInProcess) {
  esslab::RandomStream rng{11};
  const esslab::Gaussian1D proposal{0.7, 2.0};
  const auto ws = esslab::compute_weights(esslab::Gaussian1D{0.0, 1.0}, proposal, esslab::sample(proposal, rng, 500));
  const auto h = esslab::Integrand::abs_greater_than(1.0);
  const auto direct = esslab::make_report(ws, h);

  std::stringstream buffer;
  esslab::csv::write_weighted_samples(buffer, ws);
  const auto parsed = esslab::diagnose(buffer, h);
  EXPECT_EQ(parsed.n, direct.n);
  EXPECT_NEAR(parsed.ess_hat, direct.ess_hat, 1e-12);
  EXPECT_NEAR(parsed.cv, direct.cv, 1e-12);
  EXPECT_NEAR(parsed.l2, direct.l2, 1e-12);
  EXPECT_NEAR(*parsed.ess_hat_h, *direct.ess_hat_h, 1e-12);
}

TEST(Diagnose, ParseErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in{text};
    try {
      esslab::diagnose(in);
    } catch (const esslab::ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("x,w\n1,0\n"), 1u);
  EXPECT_EQ(line_of("x,log_w\n1,0\n2,abc\n"), 3u);
  EXPECT_EQ(line_of("# c\nx,log_w\n1,0\n\n2\n"), 5u);
  EXPECT_EQ(line_of("x,log_w\n1,inf\n"), 2u);
  EXPECT_EQ(line_of("x,log_w\n"), 1u);
}

TEST(Diagnose, ReportCsv) {
  std::istringstream in{"x,log_w\n1,0\n-1,0\n"};
  const auto h = esslab::Integrand::identity();
  const auto report = esslab::diagnose(in, h);
  std::ostringstream out;
  esslab::write_report_csv(out, report, h);
  EXPECT_NE(out.str().find("n,ess_hat,cv,l2,ess_hat_h\n2,2,0,0,2\n"), std::string::npos) << out.str();

  std::ostringstream plain;
  esslab::write_report_csv(plain, esslab::make_report(esslab::WeightedSampleSet{{1.0}, {0.0}}), std::nullopt);
  EXPECT_NE(plain.str().find("\n1,1,0,0,\n"), std::string::npos) << plain.str();
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    EXPECT_EQ(std::stod(esslab::csv::format_double(x)), x);
  }
  EXPECT_EQ(esslab::csv::format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

}  // namespace
