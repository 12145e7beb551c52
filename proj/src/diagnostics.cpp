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

#include "esslab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "esslab/errors.hpp"
#include "esslab/kernels.hpp"

namespace esslab {
namespace {

constexpr double kSumTolerance = 1e-9;

// Validates normalized weights and returns their maximum.
double check_normalized(std::span<const double> w) {
  if (w.empty()) {
    throw InvalidWeightsError("normalized weights: empty vector");
  }
  for (const double v : w) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidWeightsError("normalized weights must lie in [0, 1]");
    }
  }
  const auto& k = kernels::active_kernels();
  const double total = k.power_sums(w, 1.0).sum;
  if (std::fabs(total - 1.0) > kSumTolerance) {
    throw InvalidWeightsError("normalized weights must sum to 1");
  }
  return k.max(w);
}

}  // namespace

double ess_hat(std::span<const double> normalized_weights) {
  const double peak = check_normalized(normalized_weights);
  const auto sums = kernels::active_kernels().power_sums(normalized_weights, peak);
  const double n = static_cast<double>(normalized_weights.size());
  return std::clamp(sums.sum * sums.sum / sums.sum_squares, 1.0, n);
}

double ess_hat_h(const WeightedSampleSet& ws, const Integrand& h) {
  std::vector<double> log_products(ws.size());
  bool any_mass = false;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const double magnitude = std::fabs(h(ws.samples()[i]));
    log_products[i] = ws.log_weights()[i] + std::log(magnitude);
    any_mass = any_mass || (magnitude > 0.0 && std::isfinite(log_products[i]));
  }
  if (!any_mass) {
    throw NoMassUnderH("every |h(x_n)| w_n is zero; the sample set carries no information about h");
  }
  return ess_hat(normalize(log_products));
}

double cv(std::span<const double> normalized_weights) {
  check_normalized(normalized_weights);
  const double n = static_cast<double>(normalized_weights.size());
  const double dev = kernels::active_kernels().sum_squared_deviations(normalized_weights, 1.0 / n);
  return std::sqrt(n * dev);
}

double l2_discrepancy(std::span<const double> normalized_weights) {
  check_normalized(normalized_weights);
  const double n = static_cast<double>(normalized_weights.size());
  return std::sqrt(kernels::active_kernels().sum_squared_deviations(normalized_weights, 1.0 / n));
}

double ess_hat_from_unnormalized(std::span<const double> log_weights) {
  if (log_weights.empty()) {
    throw std::invalid_argument("ess_hat_from_unnormalized: empty vector");
  }
  const auto& k = kernels::active_kernels();
  const double peak = k.max(log_weights);
  if (!std::isfinite(peak)) {
    throw std::invalid_argument("ess_hat_from_unnormalized: no finite log-weight");
  }
  // Z and E_q[W^2] approximated by (1/N) sum w and (1/N) sum w^2; the common factor exp(peak)
  // cancels.
  std::vector<double> shifted(log_weights.size());
  k.exp_shifted(log_weights, peak, shifted);
  const auto sums = k.power_sums(shifted, 1.0);
  const double n = static_cast<double>(log_weights.size());
  const double mean_w = sums.sum / n;
  const double mean_w2 = sums.sum_squares / n;
  return n * mean_w * mean_w / mean_w2;
}

double convex_combination_variance(std::span<const double> unnormalized_weights, double sigma2_z) {
  if (!(sigma2_z > 0.0)) {
    throw std::invalid_argument("convex_combination_variance: sigma2_z must be positive");
  }
  if (unnormalized_weights.empty()) {
    throw InvalidWeightsError("convex_combination_variance: empty weight vector");
  }
  for (const double w : unnormalized_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidWeightsError("convex_combination_variance: weights must be finite and >= 0");
    }
  }
  const auto& k = kernels::active_kernels();
  const double peak = k.max(unnormalized_weights);
  if (!(peak > 0.0)) {
    throw InvalidWeightsError("convex_combination_variance: all weights are zero");
  }
  const auto sums = k.power_sums(unnormalized_weights, peak);
  return sigma2_z * sums.sum_squares / (sums.sum * sums.sum);
}

DeltaChain ess_delta_chain(std::size_t n, double var_w, double z, VarianceSource source) {
  if (!(var_w >= 0.0)) {
    throw std::invalid_argument("ess_delta_chain: var_w must be >= 0");
  }
  if (!(z > 0.0)) {
    throw std::invalid_argument("ess_delta_chain: z must be positive");
  }
  const double nd = static_cast<double>(n);
  const double z2 = z * z;
  return DeltaChain{
      .n = n,
      .var_w = var_w,
      .e_w2 = var_w + z2,
      .z = z,
      .ess_kong = nd / (1.0 + var_w),
      .ess_z_corrected = nd * z2 / (z2 + var_w),
      .source = source,
  };
}

DeltaChain empirical_delta_chain(const WeightedSampleSet& ws) {
  const auto& k = kernels::active_kernels();
  const auto lw = ws.log_weights();
  const double peak = k.max(lw);
  std::vector<double> shifted(lw.size());
  k.exp_shifted(lw, peak, shifted);
  const auto sums = k.power_sums(shifted, 1.0);
  const double n = static_cast<double>(lw.size());
  const double scale = std::exp(peak);
  const double mean_e = sums.sum / n;
  const double var_e = std::max(0.0, sums.sum_squares / n - mean_e * mean_e);
  return ess_delta_chain(ws.size(), var_e * scale * scale, mean_e * scale, VarianceSource::kEmpirical);
}

EssReport make_report(const WeightedSampleSet& ws, const std::optional<Integrand>& h) {
  const std::vector<double> w = normalize(ws);
  EssReport report{
      .n = ws.size(),
      .ess_hat = ess_hat(w),
      .cv = cv(w),
      .l2 = l2_discrepancy(w),
      .ess_hat_h = std::nullopt,
      .delta_chain = std::nullopt,
  };
  if (h) {
    report.ess_hat_h = ess_hat_h(ws, *h);
  }
  // exp(peak) overflows for extreme log-weights; the chain is then left out of the report.
  if (const double peak = kernels::active_kernels().max(ws.log_weights()); std::fabs(peak) < 300.0) {
    report.delta_chain = empirical_delta_chain(ws);
  }
  return report;
}

}  // namespace esslab
