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

#include "esslab/ground_truth.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "esslab/diagnostics.hpp"
#include "esslab/errors.hpp"
#include "esslab/kernels.hpp"
#include "esslab/random.hpp"

namespace esslab {
namespace {

constexpr std::size_t kBatches = 50;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ReplicateResult {
  double raw;
  double snis;
  double ess_hat;
  double zhat;
};

ReplicateResult run_one(const ReplicationPlan& plan, std::size_t r) {
  const std::size_t n = plan.n_per_run;
  std::vector<double> raw_samples(n);
  RandomStream target_stream{derive_seed(plan.master_seed, {r, 0})};
  sample_into(plan.target, target_stream, raw_samples);

  RandomStream proposal_stream{derive_seed(plan.master_seed, {r, 1})};
  const WeightedSampleSet ws = std::visit(
      [&](const auto& source) -> WeightedSampleSet {
        using T = std::decay_t<decltype(source)>;
        if constexpr (std::is_same_v<T, Density>) {
          return compute_weights(plan.target, source, sample(source, proposal_stream, n));
        } else {
          return mis_sample(source, plan.target, proposal_stream, n);
        }
      },
      plan.proposal);

  return ReplicateResult{
      .raw = raw_mc_estimate(raw_samples, plan.integrand),
      .snis = snis_estimate(ws, plan.integrand),
      .ess_hat = ess_hat(normalize(ws)),
      .zhat = std::exp(log_z_estimate(ws.log_weights())),
  };
}

std::vector<ReplicateResult> run_all(const ReplicationPlan& plan) {
  std::vector<ReplicateResult> results(plan.replicates);
  std::size_t workers = plan.workers != 0 ? plan.workers : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, plan.replicates);

  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&](std::size_t begin, std::size_t end) {
    try {
      for (std::size_t r = begin; r < end; ++r) {
        results[r] = run_one(plan, r);
      }
    } catch (...) {
      const std::lock_guard lock{failure_mutex};
      if (!failure) {
        failure = std::current_exception();
      }
    }
  };

  if (workers <= 1) {
    work(0, plan.replicates);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(work, plan.replicates * w / workers, plan.replicates * (w + 1) / workers);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return results;
}

struct Moments {
  double mean;
  double variance;  // unbiased
  double fourth;    // plain fourth central moment
};

Moments moments(std::span<const double> x) {
  const auto& k = kernels::active_kernels();
  const double n = static_cast<double>(x.size());
  const double mean = k.power_sums(x, 1.0).sum / n;
  const double ss = k.sum_squared_deviations(x, mean);
  double fourth = 0.0;
  for (const double v : x) {
    const double d = (v - mean) * (v - mean);
    fourth += d * d;
  }
  return {mean, x.size() > 1 ? ss / (n - 1.0) : kNaN, fourth / n};
}

double mean_squared_error(std::span<const double> x, double truth) {
  return kernels::active_kernels().sum_squared_deviations(x, truth) / static_cast<double>(x.size());
}

double standard_error_of_mean(std::span<const double> x) {
  return std::sqrt(moments(x).variance / static_cast<double>(x.size()));
}

// Batch-means standard error of a per-batch statistic.
double batch_spread(const std::vector<double>& per_batch) {
  if (per_batch.size() < 2) {
    return kNaN;
  }
  for (const double v : per_batch) {
    if (!std::isfinite(v)) {
      return kNaN;
    }
  }
  return standard_error_of_mean(per_batch);
}

}  // namespace

void ReplicationPlan::validate() const {
  if (replicates < 2) {
    throw std::invalid_argument("ReplicationPlan: replicates must be >= 2");
  }
  if (n_per_run < 1) {
    throw std::invalid_argument("ReplicationPlan: n_per_run must be >= 1");
  }
  if (const auto* scheme = std::get_if<MisScheme>(&proposal); scheme != nullptr && !scheme->accepts(n_per_run)) {
    throw std::invalid_argument("ReplicationPlan: n_per_run must be a multiple of the number of proposals");
  }
}

GroundTruth run_replication(const ReplicationPlan& plan) {
  plan.validate();
  const std::vector<ReplicateResult> results = run_all(plan);

  const std::size_t r = plan.replicates;
  std::vector<double> raw(r);
  std::vector<double> snis(r);
  std::vector<double> hats(r);
  std::vector<double> zhats(r);
  std::vector<double> sq_err(r);
  for (std::size_t i = 0; i < r; ++i) {
    raw[i] = results[i].raw;
    snis[i] = results[i].snis;
    hats[i] = results[i].ess_hat;
    zhats[i] = results[i].zhat;
    sq_err[i] = (snis[i] - plan.true_value) * (snis[i] - plan.true_value);
  }

  const double n = static_cast<double>(plan.n_per_run);
  const double rd = static_cast<double>(r);
  const Moments raw_m = moments(raw);
  const Moments snis_m = moments(snis);
  const Moments hat_m = moments(hats);
  const Moments z_m = moments(zhats);
  const double mse = mean_squared_error(snis, plan.true_value);

  if (!(snis_m.variance > 0.0)) {
    throw ReplicationError("SNIS replicate variance is zero; increase replicates or check the integrand");
  }

  GroundTruth gt{
      .n = plan.n_per_run,
      .replicates = r,
      .var_raw = raw_m.variance,
      .var_snis = snis_m.variance,
      .mse_snis = mse,
      .bias_snis = snis_m.mean - plan.true_value,
      .ess = n * raw_m.variance / snis_m.variance,
      .ess_star = n * raw_m.variance / mse,
      .ess_hat_mean = hat_m.mean,
      .ess_hat_sd = std::sqrt(hat_m.variance),
      .zhat_mean = z_m.mean,
      .var_zhat = z_m.variance,
      .std_errors = {},
  };

  auto variance_se = [rd](const Moments& m) {
    return std::sqrt(std::max(0.0, m.fourth - m.variance * m.variance) / rd);
  };
  gt.std_errors.var_raw = variance_se(raw_m);
  gt.std_errors.var_snis = variance_se(snis_m);
  gt.std_errors.mse_snis = standard_error_of_mean(sq_err);
  gt.std_errors.bias_snis = std::sqrt(snis_m.variance / rd);

  const std::size_t batches = std::min(kBatches, r / 2);
  std::vector<double> batch_ess;
  std::vector<double> batch_ess_star;
  for (std::size_t b = 0; b < batches && batches >= 2; ++b) {
    const std::size_t lo = r * b / batches;
    const std::size_t hi = r * (b + 1) / batches;
    const std::span<const double> raw_b{raw.data() + lo, hi - lo};
    const std::span<const double> snis_b{snis.data() + lo, hi - lo};
    const double var_raw_b = moments(raw_b).variance;
    batch_ess.push_back(n * var_raw_b / moments(snis_b).variance);
    batch_ess_star.push_back(n * var_raw_b / mean_squared_error(snis_b, plan.true_value));
  }
  gt.std_errors.ess = batch_spread(batch_ess);
  gt.std_errors.ess_star = batch_spread(batch_ess_star);
  return gt;
}

double rrmse(const GroundTruth& gt, double true_value) {
  if (true_value == 0.0) {
    throw std::invalid_argument("rrmse: true value is zero");
  }
  return std::sqrt(gt.mse_snis) / std::fabs(true_value);
}

}  // namespace esslab
