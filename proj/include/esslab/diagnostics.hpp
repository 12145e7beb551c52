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

#ifndef ESSLAB_DIAGNOSTICS_HPP
#define ESSLAB_DIAGNOSTICS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "esslab/estimators.hpp"

/**
 * \file
 * \brief Closed-form effective-sample-size quantities computed from a weighted sample set.
 *
 * The weight-only diagnostics (`ess_hat`, `cv`, `l2_discrepancy`) take normalized weights summing
 * to 1 and are tied together by
 *
 *     ess_hat = 1 / sum wbar^2 = N / (1 + cv^2) = 1 / (l2^2 + 1/N).
 *
 * `ess_delta_chain` evaluates the delta-method approximation of the variance-ratio ESS from the
 * weight variance, either with the normalized-target assumption (Z = 1) or with a known Z.
 */

namespace esslab {

/// 1 / sum wbar_n^2, in [1, N].
/**
 * Weights must lie in [0, 1] and sum to 1 within 1e-9, otherwise InvalidWeightsError.
 * Evaluated as (sum u)^2 / sum u^2 with u = wbar / max(wbar), which is scale-free and returns
 * exactly N for equal weights and exactly 1 for a single non-zero weight.
 */
double ess_hat(std::span<const double> normalized_weights);

/// ESS-hat of the weights `|h(x_n)| w_n` renormalized. Throws NoMassUnderH when all vanish.
double ess_hat_h(const WeightedSampleSet& ws, const Integrand& h);

/// Coefficient of variation sqrt((1/N) sum (N wbar_n - 1)^2). Same precondition as ess_hat.
double cv(std::span<const double> normalized_weights);

/// Euclidean distance between the weights and the uniform pmf. Same precondition as ess_hat.
double l2_discrepancy(std::span<const double> normalized_weights);

/// N (mean w)^2 / (mean w^2), evaluated from log-weights without normalizing first.
double ess_hat_from_unnormalized(std::span<const double> log_weights);

/// Variance of sum w_n Z_n / sum w_n for i.i.d. Z_n of variance `sigma2_z`.
double convex_combination_variance(std::span<const double> unnormalized_weights, double sigma2_z);

enum class VarianceSource { kAnalytic, kEmpirical };

struct DeltaChain {
  std::size_t n;
  double var_w;            ///< Var_q[W]
  double e_w2;             ///< E_q[W^2] = Var_q[W] + Z^2
  double z;                ///< E_q[W]
  double ess_kong;         ///< N / (1 + Var_q[W]), assumes Z = 1
  double ess_z_corrected;  ///< N Z^2 / E_q[W^2]
  VarianceSource source;
};

/// Requires var_w >= 0 and z > 0 (std::invalid_argument otherwise).
DeltaChain ess_delta_chain(std::size_t n, double var_w, double z,
                           VarianceSource source = VarianceSource::kAnalytic);

/// Delta chain with Z and Var_q[W] replaced by their particle estimates (plain 1/N moments).
/// Its `ess_z_corrected` coincides with ESS-hat.
DeltaChain empirical_delta_chain(const WeightedSampleSet& ws);

struct EssReport {
  std::size_t n;
  double ess_hat;
  double cv;
  double l2;
  std::optional<double> ess_hat_h;
  std::optional<DeltaChain> delta_chain;
};

/// Every weight-based diagnostic for one sample set; `ess_hat_h` only when `h` is given.
EssReport make_report(const WeightedSampleSet& ws, const std::optional<Integrand>& h = std::nullopt);

}  // namespace esslab

#endif
