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

#include "esslab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "esslab/errors.hpp"
#include "esslab/kernels.hpp"

namespace esslab {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

Gaussian1D::Gaussian1D(double mean, double variance)
    : mean_(mean),
      variance_(variance),
      sd_(std::sqrt(variance)),
      inv_sd_(1.0 / std::sqrt(variance)),
      log_norm_(-0.5 * std::log(2.0 * std::numbers::pi * variance)) {
  if (!std::isfinite(mean) || !std::isfinite(variance) || !(variance > 0.0)) {
    throw std::invalid_argument("Gaussian1D: variance must be positive and finite");
  }
}

double Gaussian1D::log_density(double x) const {
  const double z = (x - mean_) * inv_sd_;
  return log_norm_ - 0.5 * (z * z);
}

GaussianMixture1D::GaussianMixture1D(std::vector<Component> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw std::invalid_argument("GaussianMixture1D: at least one component required");
  }
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0) || c.weight > 1.0) {
      throw std::invalid_argument("GaussianMixture1D: component weights must lie in (0, 1]");
    }
    total += c.weight;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("GaussianMixture1D: component weights must sum to 1");
  }
}

GaussianMixture1D GaussianMixture1D::uniform(const std::vector<Gaussian1D>& gaussians) {
  std::vector<Component> components;
  components.reserve(gaussians.size());
  const double w = 1.0 / static_cast<double>(gaussians.size());
  for (const auto& g : gaussians) {
    components.push_back({w, g});
  }
  return GaussianMixture1D{std::move(components)};
}

double GaussianMixture1D::mean() const {
  double m = 0.0;
  for (const auto& c : components_) {
    m += c.weight * c.gaussian.mean();
  }
  return m;
}

Density::Density(ScaledDensity s) : value_(std::move(s)) {
  if (std::get<ScaledDensity>(value_).base == nullptr) {
    throw std::invalid_argument("ScaledDensity: base density is null");
  }
  if (!std::isfinite(std::get<ScaledDensity>(value_).log_z)) {
    throw std::invalid_argument("ScaledDensity: log_z must be finite");
  }
}

Density Density::scaled(const Density& base, double log_z) {
  return Density{ScaledDensity{std::make_shared<const Density>(base), log_z}};
}

double Density::log_normalizer() const {
  return std::visit(Overloaded{
                        [](const Gaussian1D&) { return 0.0; },
                        [](const GaussianMixture1D&) { return 0.0; },
                        [](const ScaledDensity& s) { return s.log_z + s.base->log_normalizer(); },
                    },
                    value_);
}

std::pair<double, double> Density::support_window(double k) const {
  return std::visit(
      Overloaded{
          [k](const Gaussian1D& g) { return std::pair{g.mean() - k * g.sd(), g.mean() + k * g.sd()}; },
          [k](const GaussianMixture1D& m) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (const auto& c : m.components()) {
              lo = std::min(lo, c.gaussian.mean() - k * c.gaussian.sd());
              hi = std::max(hi, c.gaussian.mean() + k * c.gaussian.sd());
            }
            return std::pair{lo, hi};
          },
          [k](const ScaledDensity& s) { return s.base->support_window(k); },
      },
      value_);
}

std::string Density::describe() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const Gaussian1D& g) { out << "N(" << g.mean() << ";" << g.variance() << ")"; },
                 [&](const GaussianMixture1D& m) {
                   out << "Mix[";
                   for (std::size_t i = 0; i < m.components().size(); ++i) {
                     const auto& c = m.components()[i];
                     out << (i == 0 ? "" : " ") << c.weight << "*N(" << c.gaussian.mean() << ";"
                         << c.gaussian.variance() << ")";
                   }
                   out << "]";
                 },
                 [&](const ScaledDensity& s) { out << "exp(" << s.log_z << ")*" << s.base->describe(); },
             },
             value_);
  return out.str();
}

double log_density(const Density& d, double x) {
  return std::visit(Overloaded{
                        [x](const Gaussian1D& g) { return g.log_density(x); },
                        [x](const GaussianMixture1D& m) {
                          double peak = kNegInf;
                          for (const auto& c : m.components()) {
                            peak = std::max(peak, std::log(c.weight) + c.gaussian.log_density(x));
                          }
                          if (peak == kNegInf) {
                            return kNegInf;
                          }
                          double s = 0.0;
                          for (const auto& c : m.components()) {
                            s += std::exp(std::log(c.weight) + c.gaussian.log_density(x) - peak);
                          }
                          return peak + std::log(s);
                        },
                        [x](const ScaledDensity& s) { return s.log_z + log_density(*s.base, x); },
                    },
                    d.value());
}

void log_mixture(std::span<const double> log_weights,
                 const std::vector<std::vector<double>>& component_log_densities,
                 std::span<double> out) {
  const std::size_t k = log_weights.size();
  for (std::size_t i = 0; i < out.size(); ++i) {
    double peak = kNegInf;
    for (std::size_t j = 0; j < k; ++j) {
      peak = std::max(peak, log_weights[j] + component_log_densities[j][i]);
    }
    if (peak == kNegInf) {
      out[i] = kNegInf;
      continue;
    }
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      s += std::exp(log_weights[j] + component_log_densities[j][i] - peak);
    }
    out[i] = peak + std::log(s);
  }
}

void log_density(const Density& d, std::span<const double> xs, std::span<double> out) {
  if (xs.size() != out.size()) {
    throw std::invalid_argument("log_density: output span size mismatch");
  }
  const auto& kernels = kernels::active_kernels();
  std::visit(Overloaded{
                 [&](const Gaussian1D& g) {
                   kernels.gaussian_log_pdf(xs, g.mean(), g.inv_sd(), g.log_norm(), out);
                 },
                 [&](const GaussianMixture1D& m) {
                   std::vector<double> log_weights;
                   std::vector<std::vector<double>> per_component;
                   for (const auto& c : m.components()) {
                     log_weights.push_back(std::log(c.weight));
                     auto& values = per_component.emplace_back(xs.size());
                     kernels.gaussian_log_pdf(xs, c.gaussian.mean(), c.gaussian.inv_sd(),
                                              c.gaussian.log_norm(), values);
                   }
                   log_mixture(log_weights, per_component, out);
                 },
                 [&](const ScaledDensity& s) {
                   log_density(*s.base, xs, out);
                   for (double& v : out) {
                     v += s.log_z;
                   }
                 },
             },
             d.value());
}

void sample_into(const Density& d, RandomStream& rng, std::span<double> out) {
  std::visit(Overloaded{
                 [&](const Gaussian1D& g) {
                   for (double& x : out) {
                     x = g.mean() + g.sd() * rng.normal();
                   }
                 },
                 [&](const GaussianMixture1D& m) {
                   const auto& comps = m.components();
                   for (double& x : out) {
                     const double u = rng.uniform();
                     double cumulative = 0.0;
                     std::size_t pick = comps.size() - 1;
                     for (std::size_t j = 0; j + 1 < comps.size(); ++j) {
                       cumulative += comps[j].weight;
                       if (u < cumulative) {
                         pick = j;
                         break;
                       }
                     }
                     const auto& g = comps[pick].gaussian;
                     x = g.mean() + g.sd() * rng.normal();
                   }
                 },
                 [&](const ScaledDensity& s) { sample_into(*s.base, rng, out); },
             },
             d.value());
}

std::vector<double> sample(const Density& d, RandomStream& rng, std::size_t n) {
  std::vector<double> out(n);
  sample_into(d, rng, out);
  return out;
}

double chi2_gaussian(const Gaussian1D& target, const Gaussian1D& proposal) {
  // int p^2/q = v_q / (sqrt(v_p) sqrt(2 v_q - v_p)) * exp((m_p - m_q)^2 / (2 v_q - v_p))
  const double spread = 2.0 * proposal.variance() - target.variance();
  if (!(spread > 0.0)) {
    throw DivergenceError("chi2_gaussian: 2 * proposal variance <= target variance, E_q[W^2] is infinite");
  }
  const double dm = target.mean() - proposal.mean();
  return proposal.variance() / (target.sd() * std::sqrt(spread)) * std::exp(dm * dm / spread);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace esslab
