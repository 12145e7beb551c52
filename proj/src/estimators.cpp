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

#include "esslab/estimators.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "esslab/kernels.hpp"

namespace esslab {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Largest log-weight; throws if no weight is positive and finite.
double checked_max(std::span<const double> log_weights) {
  if (log_weights.empty()) {
    throw std::invalid_argument("empty weight vector");
  }
  const double m = kernels::active_kernels().max(log_weights);
  if (!std::isfinite(m)) {
    throw std::invalid_argument(m > 0 ? "log-weight of +inf" : "all weights are zero");
  }
  return m;
}

// exp(lw - max(lw)) with the sum. The largest entry maps to exactly 1.
std::vector<double> shifted_weights(std::span<const double> log_weights, double& total) {
  const double m = checked_max(log_weights);
  std::vector<double> out(log_weights.size());
  total = kernels::active_kernels().exp_shifted(log_weights, m, out);
  return out;
}

}  // namespace

Integrand Integrand::abs_greater_than(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("abs_greater_than: alpha must be finite and >= 0");
  }
  return Integrand{IndicatorAbsGreaterThan{alpha}};
}

Integrand Integrand::custom(Custom fn, std::string name) {
  if (!fn) {
    throw std::invalid_argument("custom integrand is empty");
  }
  return Integrand{std::move(fn), std::move(name)};
}

Integrand Integrand::parse(const std::string& text) {
  if (text == "identity") {
    return identity();
  }
  constexpr std::string_view kPrefix = "abs-gt:";
  if (text.starts_with(kPrefix)) {
    const char* first = text.data() + kPrefix.size();
    const char* last = text.data() + text.size();
    double alpha = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, alpha);
    if (ec == std::errc{} && ptr == last) {
      return abs_greater_than(alpha);
    }
  }
  throw std::invalid_argument("unknown integrand '" + text + "' (expected identity or abs-gt:<alpha>)");
}

double Integrand::operator()(double x) const {
  return std::visit(Overloaded{
                        [x](const Identity&) { return x; },
                        [x](const IndicatorAbsGreaterThan& h) { return std::fabs(x) > h.alpha ? 1.0 : 0.0; },
                        [x](const Custom& f) { return f(x); },
                    },
                    value_);
}

std::string Integrand::describe() const {
  return std::visit(Overloaded{
                        [](const Identity&) { return std::string{"identity"}; },
                        [](const IndicatorAbsGreaterThan& h) {
                          char buf[64];
                          const auto res = std::to_chars(buf, buf + sizeof(buf), h.alpha);
                          return "abs-gt:" + std::string(buf, res.ptr);
                        },
                        [this](const Custom&) { return name_; },
                    },
                    value_);
}

WeightedSampleSet::WeightedSampleSet(std::vector<double> samples, std::vector<double> log_weights,
                                     std::string provenance)
    : samples_(std::move(samples)), log_weights_(std::move(log_weights)), provenance_(std::move(provenance)) {
  if (samples_.empty()) {
    throw std::invalid_argument("WeightedSampleSet: N must be >= 1");
  }
  if (samples_.size() != log_weights_.size()) {
    throw std::invalid_argument("WeightedSampleSet: samples and log-weights differ in length");
  }
  checked_max(log_weights_);
}

WeightedSampleSet compute_weights(const Density& target, const Density& proposal, std::vector<double> samples,
                                  std::string provenance) {
  std::vector<double> log_target(samples.size());
  std::vector<double> log_proposal(samples.size());
  log_density(target, samples, log_target);
  log_density(proposal, samples, log_proposal);
  std::vector<double> log_weights(samples.size());
  kernels::active_kernels().subtract(log_target, log_proposal, log_weights);
  return WeightedSampleSet{std::move(samples), std::move(log_weights), std::move(provenance)};
}

std::vector<double> normalize(std::span<const double> log_weights) {
  double total = 0.0;
  std::vector<double> w = shifted_weights(log_weights, total);
  for (double& v : w) {
    v /= total;
  }
  return w;
}

std::vector<double> normalize(const WeightedSampleSet& ws) { return normalize(ws.log_weights()); }

std::vector<double> mean_normalized_weights(const WeightedSampleSet& ws) {
  std::vector<double> w = normalize(ws);
  const double n = static_cast<double>(ws.size());
  for (double& v : w) {
    v *= n;
  }
  return w;
}

double log_z_estimate(std::span<const double> log_weights) {
  double total = 0.0;
  shifted_weights(log_weights, total);
  return checked_max(log_weights) + std::log(total) - std::log(static_cast<double>(log_weights.size()));
}

double uis_estimate(const WeightedSampleSet& ws, const Integrand& h, double z) {
  if (!(z > 0.0)) {
    throw std::invalid_argument("uis_estimate: Z must be positive");
  }
  double total = 0.0;
  const std::vector<double> e = shifted_weights(ws.log_weights(), total);
  CompensatedSum acc;
  for (std::size_t i = 0; i < e.size(); ++i) {
    acc.add(e[i] * h(ws.samples()[i]));
  }
  const double log_scale = checked_max(ws.log_weights()) - std::log(static_cast<double>(ws.size())) - std::log(z);
  return std::exp(log_scale) * acc.value();
}

double snis_estimate(const WeightedSampleSet& ws, const Integrand& h) {
  // sum e_n h_n / sum e_n with e_n = exp(lw_n - max); identical to sum wbar_n h_n and, for equal
  // weights, bit-identical to raw_mc_estimate on the same samples.
  double total = 0.0;
  const std::vector<double> e = shifted_weights(ws.log_weights(), total);
  CompensatedSum acc;
  for (std::size_t i = 0; i < e.size(); ++i) {
    acc.add(e[i] * h(ws.samples()[i]));
  }
  return acc.value() / total;
}

double raw_mc_estimate(std::span<const double> samples, const Integrand& h) {
  if (samples.empty()) {
    throw std::invalid_argument("raw_mc_estimate: no samples");
  }
  CompensatedSum acc;
  for (const double x : samples) {
    acc.add(h(x));
  }
  return acc.value() / static_cast<double>(samples.size());
}

}  // namespace esslab
