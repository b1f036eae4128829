#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "kernels_internal.hpp"

namespace pwinterp::kernels {

const KernelTable* avx2_kernels() {
#if defined(PWINTERP_HAVE_AVX2_KERNELS)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* env = std::getenv("PWINTERP_KERNELS");
    const std::string_view choice = env != nullptr ? env : "auto";
    if (choice == "scalar") return scalar_kernels();
    if (choice == "avx2") {
      if (const auto* t = avx2_kernels()) return *t;
      throw std::runtime_error("PWINTERP_KERNELS=avx2 requested but AVX2 kernels are unavailable");
    }
    if (const auto* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return table;
}

}  // namespace pwinterp::kernels
