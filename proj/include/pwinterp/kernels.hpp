#pragma once

// Data-parallel inner loops of the per-cell quadrature. Each kernel has a
// scalar reference version and, on x86-64, an AVX2 version selected at run
// time. The two are equivalence-tested; they may differ in the last bits
// because the vector versions accumulate in four lanes.
//
// Selection: PWINTERP_KERNELS=scalar|avx2|auto (default auto). The choice is
// made once per process, so results are reproducible within a machine.

#include <cstddef>
#include <span>

namespace pwinterp::kernels {

// out[k] = constant + sum_i coeffs[i] * columns[i][k], k < out.size()
using LinearCombinationFn = void (*)(std::span<const double* const> columns, std::span<const double> coeffs,
                                     double constant, std::span<double> out);

// sum_k w[k] * |a[k] - b[k]|^p
using WeightedAbsPowSumFn = double (*)(std::span<const double> w, std::span<const double> a,
                                       std::span<const double> b, double p);

// sum_k w[k] * (sum_j (components[j][k] - offset[j])^2)^(p/2)
using WeightedNormPowSumFn = double (*)(std::span<const double> w, std::span<const double* const> components,
                                        std::span<const double> offset, double p);

struct KernelTable {
  const char* name;
  LinearCombinationFn linear_combination;
  WeightedAbsPowSumFn weighted_abs_pow_sum;
  WeightedNormPowSumFn weighted_norm_pow_sum;
};

const KernelTable& scalar_kernels();

/// nullptr when not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

const KernelTable& active_kernels();

}  // namespace pwinterp::kernels
