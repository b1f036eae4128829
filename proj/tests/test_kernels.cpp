#include <atomic>
#include <cstdlib>
#include <string>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pwinterp/kernels.hpp"
#include "pwinterp/parallel.hpp"
#include "pwinterp/sampling.hpp"

using namespace pwinterp;

namespace {

std::vector<double> random_vector(SeededStream& rng, std::size_t len, double lo, double hi) {
  std::vector<double> v(len);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

void check_tables_agree(const kernels::KernelTable& ref, const kernels::KernelTable& alt) {
  SeededStream rng(21, 0);
  for (std::size_t len : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 13u, 64u, 1001u}) {
    for (int cols = 1; cols <= 4; ++cols) {
      std::vector<std::vector<double>> data;
      std::vector<const double*> columns;
      for (int c = 0; c < cols; ++c) data.push_back(random_vector(rng, len, -2.0, 2.0));
      for (const auto& d : data) columns.push_back(d.data());
      const auto coeffs = random_vector(rng, static_cast<std::size_t>(cols), -1.0, 1.0);
      std::vector<double> out_ref(len), out_alt(len);
      ref.linear_combination(columns, coeffs, 0.7, out_ref);
      alt.linear_combination(columns, coeffs, 0.7, out_alt);
      for (std::size_t k = 0; k < len; ++k) CHECK(out_alt[k] == doctest::Approx(out_ref[k]).epsilon(1e-14));

      const auto w = random_vector(rng, len, 0.0, 1.0);
      const auto offset = random_vector(rng, static_cast<std::size_t>(cols), -1.0, 1.0);
      for (double p : {1.0, 2.0, 1.5, 3.0}) {
        const double a = ref.weighted_abs_pow_sum(w, data[0], out_ref, p);
        const double b = alt.weighted_abs_pow_sum(w, data[0], out_ref, p);
        CHECK(b == doctest::Approx(a).epsilon(1e-13));
        const double c = ref.weighted_norm_pow_sum(w, columns, offset, p);
        const double d = alt.weighted_norm_pow_sum(w, columns, offset, p);
        CHECK(d == doctest::Approx(c).epsilon(1e-13));
      }
    }
  }
}

}  // namespace

TEST_CASE("scalar kernels on small examples") {
  const auto& k = kernels::scalar_kernels();
  const std::vector<double> x{1.0, 2.0, 3.0}, y{0.0, -1.0, 1.0};
  const std::vector<const double*> cols{x.data(), y.data()};
  const std::vector<double> coeffs{2.0, 3.0};
  std::vector<double> out(3);
  k.linear_combination(cols, coeffs, 1.0, out);
  CHECK(out == std::vector<double>{3.0, 2.0, 10.0});

  const std::vector<double> w{0.5, 0.25, 0.25};
  CHECK(k.weighted_abs_pow_sum(w, x, y, 1.0) == doctest::Approx(0.5 * 1 + 0.25 * 3 + 0.25 * 2));
  CHECK(k.weighted_abs_pow_sum(w, x, y, 2.0) == doctest::Approx(0.5 * 1 + 0.25 * 9 + 0.25 * 4));
  const std::vector<double> offset{1.0, 0.0};
  // |(0,0)|, |(1,-1)|, |(2,1)|
  CHECK(k.weighted_norm_pow_sum(w, cols, offset, 2.0) == doctest::Approx(0.25 * 2 + 0.25 * 5));
  CHECK(k.weighted_norm_pow_sum(w, cols, offset, 1.0) ==
        doctest::Approx(0.25 * std::sqrt(2.0) + 0.25 * std::sqrt(5.0)));
}

TEST_CASE("vector kernels match the scalar reference") {
  const auto* avx2 = kernels::avx2_kernels();
  if (avx2 == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this machine; equivalence not exercised");
    return;
  }
  check_tables_agree(kernels::scalar_kernels(), *avx2);
}

TEST_CASE("active kernels are one of the known tables") {
  const auto& active = kernels::active_kernels();
  const bool known = &active == &kernels::scalar_kernels() || &active == kernels::avx2_kernels();
  CHECK(known);
}

TEST_CASE("parallel_for covers every index once and propagates exceptions") {
  for (std::size_t threads : {1u, 2u, 7u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); }, threads);
    bool all_once = true;
    for (const auto& h : hits) all_once = all_once && h.load() == 1;
    CHECK(all_once);
    CHECK_THROWS_AS(parallel_for(
                        100, [](std::size_t i) { if (i == 37) throw std::runtime_error("boom"); }, threads),
                    std::runtime_error);
  }
  parallel_for(0, [](std::size_t) { FAIL("no work expected"); }, 3);
}

TEST_CASE("compensated summation") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 10; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-15).epsilon(1e-12));
}

TEST_CASE("thread count override") {
  const char* saved = std::getenv("PWINTERP_THREADS");
  const std::string restore = saved ? saved : "";
  ::setenv("PWINTERP_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  ::setenv("PWINTERP_THREADS", "zero", 1);
  CHECK(thread_count() >= 1);
  ::setenv("PWINTERP_THREADS", "0", 1);
  CHECK(thread_count() >= 1);
  if (saved) {
    ::setenv("PWINTERP_THREADS", restore.c_str(), 1);
  } else {
    ::unsetenv("PWINTERP_THREADS");
  }
}
