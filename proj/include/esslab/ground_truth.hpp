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

#ifndef ESSLAB_GROUND_TRUTH_HPP
#define ESSLAB_GROUND_TRUTH_HPP

#include <cstddef>
#include <cstdint>
#include <variant>

#include "esslab/distributions.hpp"
#include "esslab/estimators.hpp"
#include "esslab/mis.hpp"

/**
 * \file
 * \brief Brute-force replication of the raw Monte Carlo and self-normalized IS estimators.
 *
 * Each replicate r draws one fresh sample set from the target (raw estimator) and one from the
 * proposal or MIS scheme (SNIS estimator). Across R replicates:
 *
 *  - var_raw, var_snis: unbiased sample variances (denominator R - 1);
 *  - bias_snis = mean(snis_r) - I and mse_snis = mean((snis_r - I)^2), so
 *    mse_snis = var_snis (R - 1) / R + bias_snis^2;
 *  - ess = N var_raw / var_snis and ess_star = N var_raw / mse_snis.
 *
 * Standard errors of ess and ess_star come from splitting the replicates into 50 contiguous
 * batches and taking the spread of the per-batch ratios.
 */

namespace esslab {

using ProposalSource = std::variant<Density, MisScheme>;

struct ReplicationPlan {
  Density target;
  ProposalSource proposal;
  Integrand integrand;
  std::size_t n_per_run = 1;
  std::size_t replicates = 10000;
  double true_value = 0.0;  ///< exact I for (target, integrand)
  std::uint64_t master_seed = 0;
  std::size_t workers = 0;  ///< 0 picks std::thread::hardware_concurrency()

  /// Throws std::invalid_argument unless replicates >= 2, n_per_run >= 1 and an MIS scheme accepts
  /// n_per_run.
  void validate() const;
};

struct GroundTruthErrors {
  double var_raw;
  double var_snis;
  double mse_snis;
  double bias_snis;
  double ess;
  double ess_star;
};

struct GroundTruth {
  std::size_t n;
  std::size_t replicates;
  double var_raw;
  double var_snis;
  double mse_snis;
  double bias_snis;
  double ess;
  double ess_star;
  double ess_hat_mean;  ///< replicate mean of the per-run ESS-hat
  double ess_hat_sd;    ///< replicate standard deviation of the per-run ESS-hat
  double zhat_mean;     ///< replicate mean of (1/N) sum W_n
  double var_zhat;      ///< replicate variance of (1/N) sum W_n
  GroundTruthErrors std_errors;
};

/// Runs the plan. Bit-identical for a given master seed whatever the worker count.
/**
 * Replicate r uses stream `derive_seed(master_seed, {r, 0})` for the target draws and
 * `derive_seed(master_seed, {r, 1})` for the proposal draws. Throws ReplicationError if the SNIS
 * replicate variance is zero.
 */
GroundTruth run_replication(const ReplicationPlan& plan);

/// sqrt(mse_snis) / |true_value|; std::invalid_argument when true_value == 0.
double rrmse(const GroundTruth& gt, double true_value);

}  // namespace esslab

#endif
