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

#ifndef ESSLAB_DISTRIBUTIONS_HPP
#define ESSLAB_DISTRIBUTIONS_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "esslab/random.hpp"

/**
 * \file
 * \brief Univariate target and proposal densities with exact samplers.
 */

namespace esslab {

class Gaussian1D {
 public:
  /// Throws std::invalid_argument unless `variance > 0` and both values are finite.
  Gaussian1D(double mean, double variance);

  [[nodiscard]] double mean() const { return mean_; }
  [[nodiscard]] double variance() const { return variance_; }
  [[nodiscard]] double sd() const { return sd_; }

  /// -0.5 ln(2 pi variance), the log-density at the mean.
  [[nodiscard]] double log_norm() const { return log_norm_; }

  [[nodiscard]] double inv_sd() const { return inv_sd_; }

  [[nodiscard]] double log_density(double x) const;

 private:
  double mean_;
  double variance_;
  double sd_;
  double inv_sd_;
  double log_norm_;
};

class GaussianMixture1D {
 public:
  struct Component {
    double weight;
    Gaussian1D gaussian;
  };

  /// Weights must lie in (0, 1] and sum to 1 within 1e-12.
  explicit GaussianMixture1D(std::vector<Component> components);

  /// Equal-weight mixture.
  static GaussianMixture1D uniform(const std::vector<Gaussian1D>& gaussians);

  [[nodiscard]] const std::vector<Component>& components() const { return components_; }
  [[nodiscard]] double mean() const;

 private:
  std::vector<Component> components_;
};

class Density;

/// `base` multiplied by `exp(log_z)`: an unnormalized density with known constant.
struct ScaledDensity {
  std::shared_ptr<const Density> base;
  double log_z;
};

/// Immutable, thread-safe handle over the supported density families.
class Density {
 public:
  using Variant = std::variant<Gaussian1D, GaussianMixture1D, ScaledDensity>;

  Density(Gaussian1D g) : value_(std::move(g)) {}         // NOLINT(google-explicit-constructor)
  Density(GaussianMixture1D m) : value_(std::move(m)) {}  // NOLINT(google-explicit-constructor)
  Density(ScaledDensity s);                               // NOLINT(google-explicit-constructor)

  static Density scaled(const Density& base, double log_z);

  [[nodiscard]] const Variant& value() const { return value_; }

  /// ln Z; 0 for the normalized families.
  [[nodiscard]] double log_normalizer() const;

  /// Bounding window [lo, hi] holding all but a negligible tail (+-`k` sd of every component).
  [[nodiscard]] std::pair<double, double> support_window(double k) const;

  [[nodiscard]] std::string describe() const;

 private:
  Variant value_;
};

double log_density(const Density& d, double x);

/// Batch form; `out.size()` must equal `xs.size()`.
void log_density(const Density& d, std::span<const double> xs, std::span<double> out);

std::vector<double> sample(const Density& d, RandomStream& rng, std::size_t n);

/// Fills `out` with independent draws.
void sample_into(const Density& d, RandomStream& rng, std::span<double> out);

/// ln(sum_k exp(log_weights[k] + log_components[k])) evaluated pointwise.
/**
 * `component_log_densities[k]` holds component k evaluated at every point. Shared by mixture
 * densities and the MIS mixture so both produce bit-identical values for identical inputs.
 */
void log_mixture(std::span<const double> log_weights,
                 const std::vector<std::vector<double>>& component_log_densities,
                 std::span<double> out);

/// E_q[(p/q)^2] for normalized Gaussians p (target) and q (proposal).
/**
 * Throws DivergenceError when 2 * q.variance() <= p.variance(), where the integral is infinite.
 */
double chi2_gaussian(const Gaussian1D& target, const Gaussian1D& proposal);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace esslab

#endif
