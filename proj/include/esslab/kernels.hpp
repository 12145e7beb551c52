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

#ifndef ESSLAB_KERNELS_HPP
#define ESSLAB_KERNELS_HPP

#include <span>

/**
 * \file
 * \brief Array kernels behind weight normalization, ESS sums and Gaussian log-densities.
 *
 * Every kernel has a scalar reference implementation. An AVX2/FMA variant is compiled on
 * x86-64 and picked at runtime when the CPU supports it. Both variants accumulate with
 * Neumaier compensation, so results agree to a few ulps rather than bit for bit.
 */

namespace esslab::kernels {

struct PowerSums {
  double sum;
  double sum_squares;
};

/// Function table for one instruction-set variant.
struct KernelTable {
  const char* name;

  /// Sum and sum of squares of `x[i] / divisor`.
  PowerSums (*power_sums)(std::span<const double> x, double divisor);

  /// Sum of `(x[i] - center)^2`.
  double (*sum_squared_deviations)(std::span<const double> x, double center);

  /// Largest element; -inf for an all -inf input. `x` must be non-empty.
  double (*max)(std::span<const double> x);

  /// `out[i] = exp(x[i] - shift)`, returning the sum of `out`. Inputs far below the shift
  /// (including -inf) produce exactly 0.
  double (*exp_shifted)(std::span<const double> x, double shift, std::span<double> out);

  /// `out[i] = log_norm - 0.5 * ((x[i] - mean) * inv_sd)^2`.
  void (*gaussian_log_pdf)(std::span<const double> x, double mean, double inv_sd, double log_norm,
                           std::span<double> out);

  /// `out[i] = a[i] - b[i]`; -inf minus a finite value stays -inf.
  void (*subtract)(std::span<const double> a, std::span<const double> b, std::span<double> out);
};

const KernelTable& scalar_kernels();

/// The AVX2 table, or nullptr when it was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

/// Table used by the library. Resolved once; `ESSLAB_KERNELS=scalar` in the environment forces
/// the reference variant.
const KernelTable& active_kernels();

namespace detail {
const KernelTable& avx2_table();
}  // namespace detail

}  // namespace esslab::kernels

#endif
