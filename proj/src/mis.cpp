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

#include "esslab/mis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "esslab/kernels.hpp"

namespace esslab {

std::string_view to_string(MisKind kind) {
  switch (kind) {
    case MisKind::kN1:
      return "N1";
    case MisKind::kN3:
      return "N3";
    case MisKind::kR3:
      return "R3";
  }
  return "?";
}

MisKind parse_mis_kind(std::string_view text) {
  if (text == "N1") {
    return MisKind::kN1;
  }
  if (text == "N3") {
    return MisKind::kN3;
  }
  if (text == "R3") {
    return MisKind::kR3;
  }
  throw std::invalid_argument("unknown MIS scheme '" + std::string{text} + "'");
}

MisScheme::MisScheme(MisKind kind, std::vector<Density> proposals)
    : kind_(kind), proposals_(std::move(proposals)) {
  if (proposals_.empty()) {
    throw std::invalid_argument("MisScheme: at least one proposal required");
  }
}

bool MisScheme::accepts(std::size_t total_n) const {
  if (total_n == 0) {
    return false;
  }
  return kind_ == MisKind::kR3 || total_n % proposals_.size() == 0;
}

void MisScheme::log_mixture_density(std::span<const double> xs, std::span<double> out) const {
  const double log_share = std::log(1.0 / static_cast<double>(proposals_.size()));
  std::vector<double> log_weights(proposals_.size(), log_share);
  std::vector<std::vector<double>> per_component;
  per_component.reserve(proposals_.size());
  for (const auto& q : proposals_) {
    auto& values = per_component.emplace_back(xs.size());
    log_density(q, xs, values);
  }
  log_mixture(log_weights, per_component, out);
}

WeightedSampleSet mis_sample(const MisScheme& scheme, const Density& target, RandomStream& rng,
                             std::size_t total_n) {
  if (!scheme.accepts(total_n)) {
    throw std::invalid_argument("mis_sample: total_n must be a positive multiple of the number of proposals");
  }
  const auto& proposals = scheme.proposals();
  const std::size_t j = proposals.size();

  std::vector<double> xs(total_n);
  if (scheme.kind() == MisKind::kR3) {
    for (std::size_t n = 0; n < total_n; ++n) {
      // Uniform component pick; min() guards the u -> 1 rounding edge.
      const auto pick = std::min(j - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(j)));
      sample_into(proposals[pick], rng, std::span<double>{&xs[n], 1});
    }
  } else {
    for (std::size_t n = 0; n < total_n; ++n) {
      sample_into(proposals[n % j], rng, std::span<double>{&xs[n], 1});
    }
  }

  std::vector<double> log_target(total_n);
  log_density(target, xs, log_target);

  std::vector<double> log_proposal(total_n);
  if (scheme.kind() == MisKind::kN1) {
    // Each sample against its own proposal, evaluated per proposal in batches.
    std::vector<double> buffer(total_n);
    for (std::size_t p = 0; p < j; ++p) {
      log_density(proposals[p], xs, buffer);
      for (std::size_t n = p; n < total_n; n += j) {
        log_proposal[n] = buffer[n];
      }
    }
  } else {
    scheme.log_mixture_density(xs, log_proposal);
  }

  std::vector<double> log_weights(total_n);
  kernels::active_kernels().subtract(log_target, log_proposal, log_weights);
  return WeightedSampleSet{std::move(xs), std::move(log_weights), std::string{to_string(scheme.kind())}};
}

double ess_mis(std::size_t total_n, double var_zhat) {
  if (!(var_zhat >= 0.0)) {
    throw std::invalid_argument("ess_mis: var_zhat must be >= 0");
  }
  return static_cast<double>(total_n) / (1.0 + var_zhat);
}

}  // namespace esslab
