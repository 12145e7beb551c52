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

// Built with -mavx2 -mfma. Nothing in here may run before dispatch has checked the CPU.

#include <immintrin.h>

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>

#include "esslab/kernels.hpp"

namespace esslab::kernels {
namespace {

constexpr std::size_t kWidth = 4;

inline __m256d abs_pd(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

// Four independent Neumaier accumulators, one per lane.
struct CompensatedLanes {
  __m256d sum = _mm256_setzero_pd();
  __m256d compensation = _mm256_setzero_pd();

  void add(__m256d x) {
    const __m256d t = _mm256_add_pd(sum, x);
    const __m256d sum_is_larger = _mm256_cmp_pd(abs_pd(sum), abs_pd(x), _CMP_GE_OQ);
    const __m256d if_sum = _mm256_add_pd(_mm256_sub_pd(sum, t), x);
    const __m256d if_x = _mm256_add_pd(_mm256_sub_pd(x, t), sum);
    compensation = _mm256_add_pd(compensation, _mm256_blendv_pd(if_x, if_sum, sum_is_larger));
    sum = t;
  }
};

// Scalar Neumaier used to fold the lanes and the tail.
struct CompensatedScalar {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      compensation += (sum - t) + x;
    } else {
      compensation += (x - t) + sum;
    }
    sum = t;
  }

  void absorb(const CompensatedLanes& lanes) {
    alignas(32) std::array<double, kWidth> s{};
    alignas(32) std::array<double, kWidth> c{};
    _mm256_store_pd(s.data(), lanes.sum);
    _mm256_store_pd(c.data(), lanes.compensation);
    for (std::size_t i = 0; i < kWidth; ++i) {
      add(s[i]);
    }
    for (std::size_t i = 0; i < kWidth; ++i) {
      add(c[i]);
    }
  }

  [[nodiscard]] double value() const { return sum + compensation; }
};

// exp(x) for x in [-708, 0]; lanes below -708 (including -inf) return 0.
// Cody-Waite reduction by ln 2, then a degree-13 Taylor polynomial on |r| <= ln(2)/2.
inline __m256d exp_nonpositive_pd(__m256d x) {
  const __m256d underflow = _mm256_cmp_pd(x, _mm256_set1_pd(-708.0), _CMP_LT_OQ);
  x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125e-1), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212e-6), r);

  constexpr std::array<double, 14> kInvFactorial{
      1.0,
      1.0,
      1.0 / 2.0,
      1.0 / 6.0,
      1.0 / 24.0,
      1.0 / 120.0,
      1.0 / 720.0,
      1.0 / 5040.0,
      1.0 / 40320.0,
      1.0 / 362880.0,
      1.0 / 3628800.0,
      1.0 / 39916800.0,
      1.0 / 479001600.0,
      1.0 / 6227020800.0,
  };
  __m256d p = _mm256_set1_pd(kInvFactorial[13]);
  for (int k = 12; k >= 0; --k) {
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFactorial[static_cast<std::size_t>(k)]));
  }

  // 2^n via the exponent field. Adding 1.5 * 2^52 leaves n (as an integer) in the low mantissa bits.
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);
  const __m256i n_bits = _mm256_castpd_si256(_mm256_add_pd(n, magic));
  const __m256i biased = _mm256_add_epi64(
      _mm256_sub_epi64(n_bits, _mm256_castpd_si256(magic)), _mm256_set1_epi64x(1023));
  const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));

  return _mm256_andnot_pd(underflow, _mm256_mul_pd(p, scale));
}

PowerSums power_sums(std::span<const double> x, double divisor) {
  const std::size_t n = x.size();
  const std::size_t body = n - n % kWidth;
  const __m256d d = _mm256_set1_pd(divisor);
  CompensatedLanes sum;
  CompensatedLanes sum_squares;
  for (std::size_t i = 0; i < body; i += kWidth) {
    const __m256d u = _mm256_div_pd(_mm256_loadu_pd(x.data() + i), d);
    sum.add(u);
    sum_squares.add(_mm256_mul_pd(u, u));
  }
  CompensatedScalar s;
  CompensatedScalar q;
  s.absorb(sum);
  q.absorb(sum_squares);
  for (std::size_t i = body; i < n; ++i) {
    const double u = x[i] / divisor;
    s.add(u);
    q.add(u * u);
  }
  return {s.value(), q.value()};
}

double sum_squared_deviations(std::span<const double> x, double center) {
  const std::size_t n = x.size();
  const std::size_t body = n - n % kWidth;
  const __m256d c = _mm256_set1_pd(center);
  CompensatedLanes acc;
  for (std::size_t i = 0; i < body; i += kWidth) {
    const __m256d dev = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), c);
    acc.add(_mm256_mul_pd(dev, dev));
  }
  CompensatedScalar total;
  total.absorb(acc);
  for (std::size_t i = body; i < n; ++i) {
    const double dev = x[i] - center;
    total.add(dev * dev);
  }
  return total.value();
}

double max(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t body = n - n % kWidth;
  double m = -std::numeric_limits<double>::infinity();
  if (body > 0) {
    __m256d acc = _mm256_set1_pd(m);
    for (std::size_t i = 0; i < body; i += kWidth) {
      acc = _mm256_max_pd(acc, _mm256_loadu_pd(x.data() + i));
    }
    alignas(32) std::array<double, kWidth> lanes{};
    _mm256_store_pd(lanes.data(), acc);
    for (const double v : lanes) {
      m = v > m ? v : m;
    }
  }
  for (std::size_t i = body; i < n; ++i) {
    m = x[i] > m ? x[i] : m;
  }
  return m;
}

double exp_shifted(std::span<const double> x, double shift, std::span<double> out) {
  const std::size_t n = x.size();
  const std::size_t body = n - n % kWidth;
  const __m256d s = _mm256_set1_pd(shift);
  CompensatedLanes acc;
  for (std::size_t i = 0; i < body; i += kWidth) {
    const __m256d e = exp_nonpositive_pd(_mm256_sub_pd(_mm256_loadu_pd(x.data() + i), s));
    _mm256_storeu_pd(out.data() + i, e);
    acc.add(e);
  }
  CompensatedScalar total;
  total.absorb(acc);
  if (body < n) {
    alignas(32) std::array<double, kWidth> in{};
    alignas(32) std::array<double, kWidth> res{};
    in.fill(-std::numeric_limits<double>::infinity());
    for (std::size_t i = body; i < n; ++i) {
      in[i - body] = x[i] - shift;
    }
    _mm256_store_pd(res.data(), exp_nonpositive_pd(_mm256_load_pd(in.data())));
    for (std::size_t i = body; i < n; ++i) {
      out[i] = res[i - body];
      total.add(out[i]);
    }
  }
  return total.value();
}

void gaussian_log_pdf(std::span<const double> x, double mean, double inv_sd, double log_norm,
                      std::span<double> out) {
  const std::size_t n = x.size();
  const std::size_t body = n - n % kWidth;
  const __m256d m = _mm256_set1_pd(mean);
  const __m256d k = _mm256_set1_pd(inv_sd);
  const __m256d c = _mm256_set1_pd(log_norm);
  const __m256d half = _mm256_set1_pd(0.5);
  for (std::size_t i = 0; i < body; i += kWidth) {
    const __m256d z = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x.data() + i), m), k);
    _mm256_storeu_pd(out.data() + i, _mm256_fnmadd_pd(half, _mm256_mul_pd(z, z), c));
  }
  for (std::size_t i = body; i < n; ++i) {
    const double z = (x[i] - mean) * inv_sd;
    out[i] = log_norm - 0.5 * (z * z);
  }
}

void subtract(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = a.size();
  const std::size_t body = n - n % kWidth;
  for (std::size_t i = 0; i < body; i += kWidth) {
    _mm256_storeu_pd(out.data() + i,
                     _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
  }
  for (std::size_t i = body; i < n; ++i) {
    out[i] = a[i] - b[i];
  }
}

constexpr KernelTable kAvx2Table{
    "avx2", power_sums, sum_squared_deviations, max, exp_shifted, gaussian_log_pdf, subtract,
};

}  // namespace

namespace detail {
const KernelTable& avx2_table() { return kAvx2Table; }
}  // namespace detail

}  // namespace esslab::kernels
