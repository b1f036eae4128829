#pragma once

#include <cmath>

#include "pwinterp/kernels.hpp"

namespace pwinterp::kernels {

#if defined(PWINTERP_HAVE_AVX2_KERNELS)
const KernelTable& avx2_kernel_table();
#endif

namespace detail {

inline double abs_pow(double d, double p) {
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  return std::pow(d, p);
}

inline double norm_pow_from_square(double sq, double p) {
  if (p == 2.0) return sq;
  if (p == 1.0) return std::sqrt(sq);
  return std::pow(sq, 0.5 * p);
}

}  // namespace detail
}  // namespace pwinterp::kernels
