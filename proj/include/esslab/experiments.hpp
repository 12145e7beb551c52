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

#ifndef ESSLAB_EXPERIMENTS_HPP
#define ESSLAB_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "esslab/diagnostics.hpp"
#include "esslab/distributions.hpp"
#include "esslab/ground_truth.hpp"
#include "esslab/mis.hpp"

/**
 * \file
 * \brief Data generators for the ESS-versus-ESS-hat studies, plus the `diagnose` path.
 *
 * Every generator sweeps (N, grid value) points, runs the replication engine at each, and reports
 * true ESS and ESS-hat normalized by N. Point k of an experiment runs with master seed
 * `derive_seed(seed, {experiment tag, k})`, so each point is reproducible on its own.
 */

namespace esslab {

enum class ExperimentId { kMeanMismatch, kVarMismatch, kRareEvent, kMisScenario };

std::string_view to_string(ExperimentId id);
ExperimentId parse_experiment_id(std::string_view text);

/// Inclusive arithmetic grid lo, lo + step, ..., up to hi (with 1e-9 relative slack on hi).
struct Grid {
  double lo;
  double hi;
  double step;

  /// Parses `lo:hi:step`; std::invalid_argument on malformed text.
  static Grid parse(std::string_view text);

  /// Throws std::invalid_argument unless step > 0 and lo <= hi.
  [[nodiscard]] std::vector<double> values() const;

  [[nodiscard]] std::string to_string() const;
};

struct ExperimentConfig {
  ExperimentId id = ExperimentId::kMeanMismatch;
  Grid grid{0.0, 3.0, 0.1};
  std::vector<std::size_t> n_values{4, 16, 256};
  std::size_t replicates = 10000;
  std::uint64_t master_seed = 20190101;
  int scenario = 1;
  std::size_t workers = 0;

  /// Defaults for one experiment: grids mu_q 0:3:0.1, sigma_q 0.6:3.6:0.1, alpha 0.5:3.5:0.25;
  /// N {4,16,256} for the mismatch studies, {1000} for rare events, 3*2^k (k = 0..9) for MIS.
  static ExperimentConfig defaults(ExperimentId id);

  void validate() const;
};

struct MismatchRow {
  std::size_t n;
  double parameter;  ///< mu_q or sigma_q
  GroundTruth truth;
  double ess_over_n;
  double ess_star_over_n;
  double ess_hat_over_n;
  double ess_hat_sd_over_n;
  double ratio_hat_to_ess;
  std::optional<double> delta_chain_over_n;  ///< 1 / E_q[W^2]; empty when it diverges
  bool divergent;                            ///< 2 sigma_q^2 <= 1
};

struct RareEventRow {
  std::size_t n;
  double alpha;
  GroundTruth truth;
  double true_value;     ///< 2 Phi(-alpha)
  double var_analytic;   ///< p (1 - p) / N
  double rrmse;          ///< sqrt(MSE) / I
  double rrmse_analytic; ///< sqrt((1 - p) / (N p))
  double variance_over_value;  ///< Var / I
  double ess_over_n;
  double ess_hat_over_n;
};

struct MisRow {
  int scenario;
  MisKind scheme;
  std::size_t n;
  GroundTruth truth;
  double ess_over_n;
  double ess_star_over_n;
  double ess_hat_over_n;
  double ess_hat_sd_over_n;
  double ratio_hat_to_ess;
  double ess_mis_over_n;
};

/// Target N(0,1), proposal N(mu_q, 1), h(x) = x.
std::vector<MismatchRow> run_mean_mismatch(const ExperimentConfig& cfg);

/// Target N(0,1), proposal N(0, sigma_q^2), h(x) = x.
std::vector<MismatchRow> run_var_mismatch(const ExperimentConfig& cfg);

/// Target = proposal = N(0,1), h = 1{|x| > alpha}.
std::vector<RareEventRow> run_rare_event(const ExperimentConfig& cfg);

/// Equal-weight mixture of N(-3,1), N(0,1), N(3,1); schemes N1, N3, R3; h(x) = x.
std::vector<MisRow> run_mis_scenario(const ExperimentConfig& cfg);

/// The three-component target of the MIS study.
GaussianMixture1D mis_target();

/// Proposals for scenario 1 (means -3,0,3, var 1), 2 (-3,-1,3, var 2) or 3 (-4,-1,1, var 2).
MisScheme mis_scenario_scheme(int scenario, MisKind kind);

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<MismatchRow>& rows);
void write_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<RareEventRow>& rows);
void write_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<MisRow>& rows);

/// Runs `cfg.id` and writes its CSV.
void run_experiment(const ExperimentConfig& cfg, std::ostream& out);

/// Reads an `x,log_w` CSV and builds its EssReport.
EssReport diagnose(std::istream& in, const std::optional<Integrand>& h = std::nullopt);

/// Writes the report as the `n,ess_hat,cv,l2,ess_hat_h` CSV.
void write_report_csv(std::ostream& out, const EssReport& report, const std::optional<Integrand>& h);

}  // namespace esslab

#endif
