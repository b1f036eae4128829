#include <cmath>

#include "kernels_internal.hpp"

namespace pwinterp::kernels {
namespace {

void linear_combination_scalar(std::span<const double* const> columns, std::span<const double> coeffs,
                               double constant, std::span<double> out) {
  for (std::size_t k = 0; k < out.size(); ++k) {
    double acc = constant;
    for (std::size_t i = 0; i < columns.size(); ++i) acc += coeffs[i] * columns[i][k];
    out[k] = acc;
  }
}

double weighted_abs_pow_sum_scalar(std::span<const double> w, std::span<const double> a,
                                   std::span<const double> b, double p) {
  double sum = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double d = std::abs(a[k] - b[k]);
    sum += w[k] * detail::abs_pow(d, p);
  }
  return sum;
}

double weighted_norm_pow_sum_scalar(std::span<const double> w, std::span<const double* const> components,
                                    std::span<const double> offset, double p) {
  double sum = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
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

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", &linear_combination_scalar, &weighted_abs_pow_sum_scalar,
                                 &weighted_norm_pow_sum_scalar};
  return table;
}

}  // namespace pwinterp::kernels
