#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pwinterp/analysis.hpp"

using namespace pwinterp;
using testing::cov;
using testing::pt;

TEST_CASE("total variation of interpolants") {
  const TriangulationFrame frame(BaseTriangulation(2, 1.0), 0.5, Point::Zero(2));
  InterpolantField affine(make_affine(1.0, cov({3.0, 4.0})), frame);
  CHECK(total_variation(affine, Box::cube(2, 0.0, 2.0)) == doctest::Approx(20.0).epsilon(1e-12));

  // Smooth field: approaches ∫ |Du| = 4π ∫ ρ^2 exp(-ρ^2) dρ = π^{3/2}.
  const auto g = make_gaussian(2);
  const TriangulationFrame fine(BaseTriangulation(2), 0.05, pt({0.01, 0.02}));
  InterpolantField pg(g, fine);
  CHECK(total_variation(pg, default_domain(*g, fine)) == doctest::Approx(std::pow(M_PI, 1.5)).epsilon(1e-2));
}

TEST_CASE("indicator counterexample statistics") {
  const auto a = bv_counterexample(0.05, 24, 7, 1);
  const auto b = bv_counterexample(0.05, 24, 7, 4);
  CHECK(a.exact_tv == doctest::Approx(2.0 + std::sqrt(2.0)));
  CHECK(a.mean_tv == b.mean_tv);
  CHECK(a.min_tv == b.min_tv);
  CHECK((a.argmin_h.array() == b.argmin_h.array()).all());
  REQUIRE(a.sample_tv.size() == 24);
  REQUIRE(a.sample_h.size() == 24);
  for (std::size_t i = 0; i < 24; ++i) {
    CHECK(a.sample_tv[i] == b.sample_tv[i]);
    CHECK(a.sample_h[i].norm() < 0.05);
    CHECK(a.min_tv <= a.sample_tv[i]);
    CHECK(a.sample_tv[i] <= a.max_tv);
  }
  // The staircase along the hypotenuse overshoots the exact variation.
  CHECK(a.min_tv > a.exact_tv * 1.05);
  CHECK(a.mean_tv <= a.exact_tv * 1.25);
  CHECK_THROWS(bv_counterexample(0.0, 4, 7));
}
