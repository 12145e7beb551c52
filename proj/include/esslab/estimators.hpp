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

#ifndef ESSLAB_ESTIMATORS_HPP
#define ESSLAB_ESTIMATORS_HPP

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "esslab/distributions.hpp"

/**
 * \file
 * \brief Importance weights and the three integral estimators.
 *
 * Weights are kept as unnormalized log-weights. `normalize` returns weights summing to 1; the
 * "mean-normalized" convention (weights summing to N, each weight divided by the average weight)
 * is available through `mean_normalized_weights`.
 */

namespace esslab {

/// Function whose expectation under the target is being estimated.
class Integrand {
 public:
  struct Identity {};
  struct IndicatorAbsGreaterThan {
    double alpha;
  };
  using Custom = std::function<double(double)>;

  static Integrand identity() { return Integrand{Identity{}}; }

  /// `1{|x| > alpha}`; alpha must be >= 0.
  static Integrand abs_greater_than(double alpha);

  static Integrand custom(Custom fn, std::string name = "custom");

  /// Parses `identity` or `abs-gt:<alpha>`.
  static Integrand parse(const std::string& text);

  double operator()(double x) const;

  [[nodiscard]] std::string describe() const;

 private:
  using Variant = std::variant<Identity, IndicatorAbsGreaterThan, Custom>;
  explicit Integrand(Variant v, std::string name = {}) : value_(std::move(v)), name_(std::move(name)) {}

  Variant value_;
  std::string name_;
};

/// Samples with their unnormalized log-weights. Immutable once built.
class WeightedSampleSet {
 public:
  /// Throws std::invalid_argument on length mismatch, empty input, or no finite log-weight.
  WeightedSampleSet(std::vector<double> samples, std::vector<double> log_weights,
                    std::string provenance = {});

  [[nodiscard]] std::size_t size() const { return samples_.size(); }
  [[nodiscard]] std::span<const double> samples() const { return samples_; }
  [[nodiscard]] std::span<const double> log_weights() const { return log_weights_; }
  [[nodiscard]] const std::string& provenance() const { return provenance_; }

 private:
  std::vector<double> samples_;
  std::vector<double> log_weights_;
  std::string provenance_;
};

/// `log_w[n] = log pi(x_n) - log q(x_n)`. Throws std::invalid_argument if every weight is zero.
WeightedSampleSet compute_weights(const Density& target, const Density& proposal,
                                  std::vector<double> samples, std::string provenance = {});

/// Normalized weights `exp(lw_n - logsumexp(lw))`, summing to 1.
std::vector<double> normalize(std::span<const double> log_weights);
std::vector<double> normalize(const WeightedSampleSet& ws);

/// Weights divided by their average (they sum to N): `N * normalize(ws)`.
std::vector<double> mean_normalized_weights(const WeightedSampleSet& ws);

/// `ln((1/N) sum_n W_n)`, the log of the unbiased normalizing-constant estimate.
double log_z_estimate(std::span<const double> log_weights);

/// Unnormalized IS: `(1/(N Z)) sum_n W_n h(x_n)`.
double uis_estimate(const WeightedSampleSet& ws, const Integrand& h, double z);

/// Self-normalized IS: `sum_n wbar_n h(x_n)`.
double snis_estimate(const WeightedSampleSet& ws, const Integrand& h);

/// Plain Monte Carlo average of `h` over draws from the target.
double raw_mc_estimate(std::span<const double> samples, const Integrand& h);

}  // namespace esslab

#endif
