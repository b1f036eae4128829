#include <immintrin.h>

#include <array>
#include <cmath>

#include "kernels_internal.hpp"

namespace pwinterp::kernels {
namespace {

constexpr std::size_t kLanes = 4;

double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

void linear_combination_avx2(std::span<const double* const> columns, std::span<const double> coeffs,
                             double constant, std::span<double> out) {
  const std::size_t count = out.size();
  const std::size_t body = count - count % kLanes;
  const __m256d c0 = _mm256_set1_pd(constant);
  std::size_t k = 0;
  for (; k < body; k += kLanes) {
    __m256d acc = c0;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const __m256d x = _mm256_loadu_pd(columns[i] + k);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(coeffs[i]), x));
    }
    _mm256_storeu_pd(out.data() + k, acc);
  }
  for (; k < count; ++k) {
    double acc = constant;
    for (std::size_t i = 0; i < columns.size(); ++i) acc += coeffs[i] * columns[i][k];
    out[k] = acc;
  }
}

double weighted_abs_pow_sum_avx2(std::span<const double> w, std::span<const double> a, std::span<const double> b,
                                 double p) {
  const std::size_t count = w.size();
  const std::size_t body = count - count % kLanes;
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  if (p == 1.0 || p == 2.0) {
    for (; k < body; k += kLanes) {
      const __m256d d = _mm256_andnot_pd(sign_mask, _mm256_sub_pd(_mm256_loadu_pd(a.data() + k),
                                                                  _mm256_loadu_pd(b.data() + k)));
      const __m256d term = p == 2.0 ? _mm256_mul_pd(d, d) : d;
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w.data() + k), term));
    }
  } else {
    alignas(32) std::array<double, kLanes> lane{};
    for (; k < body; k += kLanes) {
      const __m256d d = _mm256_andnot_pd(sign_mask, _mm256_sub_pd(_mm256_loadu_pd(a.data() + k),
                                                                  _mm256_loadu_pd(b.data() + k)));
      _mm256_store_pd(lane.data(), d);
      for (auto& v : lane) v = std::pow(v, p);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w.data() + k), _mm256_load_pd(lane.data())));
    }
  }
  double sum = horizontal_sum(acc);
  for (; k < count; ++k) sum += w[k] * detail::abs_pow(std::abs(a[k] - b[k]), p);
  return sum;
}

double weighted_norm_pow_sum_avx2(std::span<const double> w, std::span<const double* const> components,
                                  std::span<const double> offset, double p) {
  const std::size_t count = w.size();
  const std::size_t body = count - count % kLanes;
  __m256d acc = _mm256_setzero_pd();
  alignas(32) std::array<double, kLanes> lane{};
  std::size_t k = 0;
  for (; k < body; k += kLanes) {
    __m256d sq = _mm256_setzero_pd();
    for (std::size_t j = 0; j < components.size(); ++j) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(components[j] + k), _mm256_set1_pd(offset[j]));
      sq = _mm256_add_pd(sq, _mm256_mul_pd(d, d));
    }
    __m256d term;
    if (p == 2.0) {
      term = sq;
    } else if (p == 1.0) {
      term = _mm256_sqrt_pd(sq);
    } else {
      _mm256_store_pd(lane.data(), sq);
      for (auto& v : lane) v = std::pow(v, 0.5 * p);
      term = _mm256_load_pd(lane.data());
    }
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w.data() + k), term));
  }
  double sum = horizontal_sum(acc);
  for (; k < count; ++k) {
    double sq = 0.0;
    for (std::size_t j = 0; j < components.size(); ++j) {
      const double d = components[j][k] - offset[j];
      sq += d * d;
    }
    sum += w[k] * detail::norm_pow_from_square(sq, p);
  }
  return sum;
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", &linear_combination_avx2, &weighted_abs_pow_sum_avx2,
                                 &weighted_norm_pow_sum_avx2};
  return table;
}

}  // namespace pwinterp::kernels
