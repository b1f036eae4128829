#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pwinterp/analysis.hpp"
#include "pwinterp/sampling.hpp"

using namespace pwinterp;
using testing::cov;
using testing::pt;

TEST_CASE("affine fields are interpolated exactly") {
  SeededStream rng(2, 0);
  for (int n = 1; n <= 3; ++n) {
    const auto u = make_field("affine", n);
    const TriangulationFrame frame(BaseTriangulation(n), 0.3, rng.in_ball(n, 0.3));
    const auto rep = interpolation_errors(u, frame, 2.0, 2.0, Box::cube(n, -1.0, 1.0));
    CHECK(rep.grad_error_p <= 1e-24);
    CHECK(rep.value_error_q <= 1e-24);
    CHECK(rep.cells_visited > 0);
  }
}

TEST_CASE("one-dimensional parabola") {
  // On a cell of length r the error of x^2 is x(r - x): ∫ e^2 = r^5 / 30, ∫ e'^2 = r^3 / 3.
  const auto u = make_norm_squared(1);
  for (double r : {0.5, 0.25, 0.125}) {
    const TriangulationFrame frame(BaseTriangulation(1), r, Point::Zero(1));
    const auto rep = interpolation_errors(u, frame, 2.0, 2.0, Box::cube(1, 0.0, 1.0));
    const double cells = 1.0 / r;
    CHECK(rep.cells_visited == static_cast<std::size_t>(cells));
    CHECK(rep.value_error_q == doctest::Approx(cells * std::pow(r, 5) / 30.0).epsilon(1e-12));
    CHECK(rep.grad_error_p == doctest::Approx(cells * std::pow(r, 3) / 3.0).epsilon(1e-12));
    // ∫_0^r (2x - r)^4 = r^5 / 5 per cell.
    CHECK(grad_error(u, frame, 4.0, Box::cube(1, 0.0, 1.0)) == doctest::Approx(cells * std::pow(r, 5) / 5.0).epsilon(1e-12));
  }
}

TEST_CASE("equivariance under translation and scaling") {
  SeededStream rng(31, 0);
  for (int n = 1; n <= 3; ++n) {
    const auto u = make_field("bump", n);
    const double r = 0.4;
    const Point h = rng.in_ball(n, r);
    const TriangulationFrame frame(BaseTriangulation(n), r, h);
    const Box domain = default_domain(*u, frame);
    for (double p : {1.0, 2.0}) {
      const auto base = interpolation_errors(u, frame, p, 2.0, domain);

      const Point t = rng.in_ball(n, 3.0);
      const auto moved = interpolation_errors(make_translated(u, t), TriangulationFrame(BaseTriangulation(n), r, h + t),
                                              p, 2.0, domain.translated(t));
      CHECK(moved.grad_error_p == doctest::Approx(base.grad_error_p).epsilon(1e-9));
      CHECK(moved.value_error_q == doctest::Approx(base.value_error_q).epsilon(1e-9));

      const double lambda = 2.0;
      const auto scaled = interpolation_errors(make_scaled(u, lambda),
                                               TriangulationFrame(BaseTriangulation(n), lambda * r, lambda * h), p,
                                               2.0, domain.scaled(lambda));
      CHECK(scaled.grad_error_p == doctest::Approx(std::pow(lambda, n - p) * base.grad_error_p).epsilon(1e-9));
      CHECK(scaled.value_error_q == doctest::Approx(std::pow(lambda, n) * base.value_error_q).epsilon(1e-9));
    }
  }
}

TEST_CASE("gradient error halves in L2 when r halves") {
  const auto u = make_gaussian(2);
  double previous = 0.0;
  for (double r : {0.2, 0.1, 0.05}) {
    const TriangulationFrame frame(BaseTriangulation(2), r, pt({0.013, -0.007}));
    const double e = grad_error(u, frame, 2.0, default_domain(*u, frame));
    if (previous > 0.0) CHECK(std::sqrt(previous / e) == doctest::Approx(2.0).epsilon(0.02));
    previous = e;
  }
}

TEST_CASE("translation error") {
  const auto u = make_gaussian(1);
  CHECK(translation_error(*u, pt({0.0}), 2.0) == 0.0);
  // Oracle: composite Simpson of (u'(x) - u'(x + h))^2 on [-10, 10].
  auto du = [](double x) { return -2.0 * x * std::exp(-x * x); };
  for (double h : {0.05, 0.3, 1.0}) {
    const int m = 20000;
    const double a = -10.0, step = 20.0 / m;
    double sum = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double x = a + i * step;
      const double d = du(x) - du(x + h);
      sum += (i == 0 || i == m ? 1.0 : (i % 2 ? 4.0 : 2.0)) * d * d;
    }
    const double oracle = sum * step / 3.0;
    CHECK(translation_error(*u, pt({h}), 2.0) == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(translation_error(*u, pt({-h}), 2.0) == doctest::Approx(oracle).epsilon(1e-8));
  }
  const auto g2 = make_gaussian(2);
  CHECK(translation_error(*g2, pt({0.1, 0.0}), 2.0) < translation_error(*g2, pt({0.2, 0.0}), 2.0));
  CHECK_THROWS(translation_error(*make_reference_indicator(), pt({0.1, 0.0}), 1.0));
}

TEST_CASE("averaged error is independent of the thread count") {
  const auto u = make_gaussian(2);
  AveragingOptions one, many;
  one.threads = 1;
  many.threads = 5;
  const auto a = averaged_error(u, 0.2, 2.0, 2.0, 12, 99, one);
  const auto b = averaged_error(u, 0.2, 2.0, 2.0, 12, 99, many);
  CHECK(a.mean == b.mean);
  CHECK(a.min == b.min);
  CHECK(a.max == b.max);
  CHECK((a.argmin_h.array() == b.argmin_h.array()).all());
  REQUIRE(a.per_sample.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK((a.per_sample[i].h.array() == b.per_sample[i].h.array()).all());
    CHECK(a.per_sample[i].total() == b.per_sample[i].total());
    CHECK(a.per_sample[i].h.norm() < 0.2);
  }
  CHECK(a.min <= a.mean);
  CHECK(a.mean <= a.max);
  // Coarse frames so that the error actually depends on h.
  const auto c = averaged_error(u, 1.0, 2.0, 2.0, 12, 99, one);
  const auto d = averaged_error(u, 1.0, 2.0, 2.0, 12, 100, one);
  CHECK(c.min < c.max);
  CHECK(c.mean != d.mean);
}

TEST_CASE("triangulation search") {
  const auto affine = make_field("affine", 2);
  const auto hit = find_triangulation(affine, 1e-6, 2.0, 2.0, 5);
  CHECK(hit.level == 0);
  CHECK(hit.frame.scale() == 1.0);
  CHECK(hit.report.total() <= 1e-6);

  const auto u = make_gaussian(2);
  const auto coarse = find_triangulation(u, 1e-1, 2.0, 2.0, 5);
  const auto fine = find_triangulation(u, 1e-2, 2.0, 2.0, 5);
  CHECK(coarse.report.total() <= 1e-1);
  CHECK(fine.report.total() <= 1e-2);
  CHECK(fine.level >= coarse.level);
  CHECK(fine.frame.scale() == doctest::Approx(std::ldexp(1.0, -fine.level)));

  SearchOptions capped;
  capped.max_levels = 1;
  capped.samples_per_level = 2;
  CHECK_THROWS_AS(find_triangulation(u, 1e-12, 2.0, 2.0, 5, capped), SearchExhaustedError);
  try {
    find_triangulation(u, 1e-12, 2.0, 2.0, 5, capped);
  } catch (const SearchExhaustedError& e) {
    CHECK(e.best().report.total() > 1e-12);
  }
}

TEST_CASE("discontinuous fields") {
  const auto tri = make_reference_indicator();
  const TriangulationFrame frame(BaseTriangulation(2), 0.1, pt({0.0123, 0.0311}));
  CHECK_THROWS(grad_error(tri, frame, 1.0, Box::cube(2, -1.0, 2.0)));
  // |u - Πu| <= 1 and vanishes on cells away from the boundary, whose
  // r-neighbourhood has area at most 2 r P + π r^2.
  const double perimeter = 2.0 + std::sqrt(2.0);
  double previous = 1e9;
  for (double r : {0.1, 0.05, 0.025}) {
    const TriangulationFrame f(BaseTriangulation(2), r, pt({0.0123 * r, 0.0311 * r}));
    const double e = value_error(tri, f, 1.0, Box::cube(2, -1.0, 2.0));
    CHECK(e > 0.0);
    CHECK(e <= 2.0 * r * perimeter + M_PI * r * r);
    CHECK(e < previous);
    previous = e;
    // Cells well inside or outside contribute exactly nothing.
    CHECK(value_error(tri, f, 1.0, Box::cube(2, 0.2, 0.3)) == 0.0);
    CHECK(value_error(tri, f, 1.0, Box::cube(2, 1.2, 1.9)) == 0.0);
  }
}
