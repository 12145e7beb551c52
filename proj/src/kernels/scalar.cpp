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

#include <cmath>
#include <cstddef>
#include <limits>

#include "esslab/kernels.hpp"

namespace esslab::kernels {
namespace {

// Neumaier's variant of Kahan summation.
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

PowerSums power_sums(std::span<const double> x, double divisor) {
  CompensatedSum sum;
  CompensatedSum sum_squares;
  for (const double v : x) {
    const double u = v / divisor;
    sum.add(u);
    sum_squares.add(u * u);
  }
  return {sum.value(), sum_squares.value()};
}

double sum_squared_deviations(std::span<const double> x, double center) {
  CompensatedSum acc;
  for (const double v : x) {
    const double d = v - center;
    acc.add(d * d);
  }
  return acc.value();
}

double max(std::span<const double> x) {
  double m = -std::numeric_limits<double>::infinity();
  for (const double v : x) {
    m = v > m ? v : m;
  }
  return m;
}

double exp_shifted(std::span<const double> x, double shift, std::span<double> out) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - shift;
    // Same flush threshold as the vector variant so both return exact zeros together.
    out[i] = d < -708.0 ? 0.0 : std::exp(d);
    acc.add(out[i]);
  }
  return acc.value();
}

void gaussian_log_pdf(std::span<const double> x, double mean, double inv_sd, double log_norm,
                      std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = (x[i] - mean) * inv_sd;
    out[i] = log_norm - 0.5 * (z * z);
  }
}

void subtract(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a[i] - b[i];
  }
}

constexpr KernelTable kScalarTable{
    "scalar", power_sums, sum_squared_deviations, max, exp_shifted, gaussian_log_pdf, subtract,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalarTable; }

}  // namespace esslab::kernels
