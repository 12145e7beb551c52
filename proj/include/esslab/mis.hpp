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

#ifndef ESSLAB_MIS_HPP
#define ESSLAB_MIS_HPP

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "esslab/distributions.hpp"
#include "esslab/estimators.hpp"
#include "esslab/random.hpp"

/**
 * \file
 * \brief Multiple importance sampling with J proposals and the equal-weight mixture psi.
 *
 *  - N1: x_n ~ q_n in round-robin order, w_n = pi(x_n) / q_n(x_n).
 *  - N3: same draws as N1, w_n = pi(x_n) / psi(x_n) (deterministic mixture).
 *  - R3: x_n ~ psi i.i.d., w_n = pi(x_n) / psi(x_n).
 */

namespace esslab {

enum class MisKind { kN1, kN3, kR3 };

/// "N1", "N3" or "R3".
std::string_view to_string(MisKind kind);

/// Inverse of to_string; std::invalid_argument on anything else.
MisKind parse_mis_kind(std::string_view text);

class MisScheme {
 public:
  /// Throws std::invalid_argument when `proposals` is empty.
  MisScheme(MisKind kind, std::vector<Density> proposals);

  [[nodiscard]] MisKind kind() const { return kind_; }
  [[nodiscard]] const std::vector<Density>& proposals() const { return proposals_; }
  [[nodiscard]] std::size_t num_proposals() const { return proposals_.size(); }

  /// Whether `total_n` satisfies the allocation rule (a multiple of J for N1 and N3).
  [[nodiscard]] bool accepts(std::size_t total_n) const;

  /// log psi(x) = log((1/J) sum_j q_j(x)), pointwise.
  void log_mixture_density(std::span<const double> xs, std::span<double> out) const;

 private:
  MisKind kind_;
  std::vector<Density> proposals_;
};

/// Draws `total_n` samples under the scheme and weights them against `target`.
/**
 * For N1/N3 sample n comes from proposal `n % J`, so each proposal is used exactly total_n / J
 * times. Throws std::invalid_argument when `scheme.accepts(total_n)` is false.
 */
WeightedSampleSet mis_sample(const MisScheme& scheme, const Density& target, RandomStream& rng,
                             std::size_t total_n);

/// N / (1 + Var[Zhat]); var_zhat must be >= 0.
double ess_mis(std::size_t total_n, double var_zhat);

}  // namespace esslab

#endif
