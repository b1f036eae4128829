#include <cmath>
#include <functional>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "pwinterp/fields.hpp"
#include "pwinterp/quadrature.hpp"
#include "pwinterp/sampling.hpp"

using namespace pwinterp;
using testing::pt;

namespace {

// All exponent tuples (alpha_0..alpha_d) with |alpha| <= degree.
void for_each_multi_index(int d, int degree, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> alpha(static_cast<std::size_t>(d + 1), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == d + 1) {
      visit(alpha);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      alpha[static_cast<std::size_t>(pos)] = a;
      rec(pos + 1, left - a);
    }
  };
  rec(0, degree);
}

}  // namespace

TEST_CASE("Gauss rules on [0,1]") {
  const auto g2 = gauss_legendre01(2);
  CHECK(g2.nodes[0] == doctest::Approx(0.5 - 0.5 / std::sqrt(3.0)));
  CHECK(g2.nodes[1] == doctest::Approx(0.5 + 0.5 / std::sqrt(3.0)));
  CHECK(g2.weights[0] == doctest::Approx(0.5));

  // Normalized moments of (1-u)^alpha: ∫ u^k (1-u)^a / ∫ (1-u)^a = k! (a+1)! / (k+a+1)!
  for (int alpha = 0; alpha <= 3; ++alpha) {
    const auto rule = gauss_jacobi01(6, alpha);
    for (int k = 0; k <= 11; ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], k);
      const double exact = testing::factorial(k) * testing::factorial(alpha + 1) / testing::factorial(k + alpha + 1);
      CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
    }
  }
  CHECK_THROWS(gauss_legendre01(0));
}

TEST_CASE("simplex rules are exact to their degree") {
  for (int d = 1; d <= 3; ++d) {
    for (int degree : {2, 5, 8}) {
      const auto rule = SimplexRule::of_degree(d, degree);
      CHECK(rule.degree() >= degree);
      CHECK(std::accumulate(rule.weights().begin(), rule.weights().end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
      for_each_multi_index(d, degree, [&](const std::vector<int>& alpha) {
        double sum = 0.0;
        for (std::size_t k = 0; k < rule.size(); ++k) {
          double term = rule.weights()[k];
          for (int i = 0; i <= d; ++i) term *= std::pow(rule.coordinate(i, k), alpha[static_cast<std::size_t>(i)]);
          sum += term;
        }
        const double exact = testing::monomial_mean(alpha);
        CHECK(std::abs(sum - exact) <= 1e-13 * exact);
      });
    }
  }
}

TEST_CASE("integrate_simplex examples") {
  const Simplex tri({pt({0, 0}), pt({1, 0}), pt({0, 1})});
  const auto rule = SimplexRule::of_degree(2, 4);
  CHECK(integrate_simplex([](const Point&) { return 1.0; }, tri, rule) == doctest::Approx(0.5));
  // β_0 β_1 = (1 - x - y) x integrates to 1/24.
  CHECK(integrate_simplex([](const Point& x) { return (1.0 - x(0) - x(1)) * x(0); }, tri, rule) ==
        doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  CHECK_THROWS_AS(integrate_simplex([](const Point&) { return std::nan(""); }, tri, rule), QuadratureError);
}

TEST_CASE("cone integration") {
  for (int n = 1; n <= 3; ++n) {
    SeededStream rng(5, static_cast<std::uint64_t>(n));
    const auto cone = ConeRule::make(n, 12, 12);
    const auto vol_rule = SimplexRule::of_degree(n, 12);
    for (int trial = 0; trial < 20; ++trial) {
      const Simplex s = random_simplex(rng, n, -1.0, 1.0);
      const int anchor = trial % (n + 1);
      CHECK(integrate_vertex_cone([](double, const Point&, const Point&) { return 1.0; }, s, anchor, cone) ==
            doctest::Approx(s.volume()).epsilon(1e-12));
      // Smooth integrand: both routes agree.
      auto f = [](const Point& x) { return std::cos(x.sum()) + x.squaredNorm(); };
      const double plain = integrate_simplex(f, s, vol_rule);
      const double coned = integrate_vertex_cone([&](double, const Point&, const Point& x) { return f(x); }, s,
                                                 anchor, cone);
      CHECK(std::abs(plain - coned) <= 1e-10 * (std::abs(plain) + s.volume()));
      // Scaling the simplex by 2 scales the integral by 2^n.
      std::array<Point, kMaxDim + 1> scaled;
      for (int i = 0; i <= n; ++i) scaled[static_cast<std::size_t>(i)] = 2.0 * s.vertex(i);
      const Simplex big(std::span<const Point>(scaled.data(), static_cast<std::size_t>(n + 1)));
      const double big_value = integrate_vertex_cone(
          [&](double, const Point&, const Point& x) { return f(x / 2.0); }, big, anchor, cone);
      CHECK(big_value == doctest::Approx(std::pow(2.0, n) * coned).epsilon(1e-12));
    }
  }
}

TEST_CASE("cone integration of the one-dimensional representation integrand") {
  // u = x^2 on [0,1], a = 0: u'(t) (0 - t) (1/t - 1) = -2t(1 - t), integral -1/3.
  const Simplex s({pt({0.0}), pt({1.0})});
  const double value = integrate_vertex_cone(
      [](double, const Point&, const Point& x) { return 2.0 * x(0) * (0.0 - x(0)) * (1.0 / x(0) - 1.0); }, s, 0,
      ConeRule::standard(1));
  CHECK(value == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("cone integration matches an adaptive oracle on a singular integrand") {
  // Lemma integrand Du(x)[a - x] (gauge^-2 - 1) for the Gaussian on a triangle, singular like 1/|x - a|.
  const Simplex s({pt({-0.3, 0.1}), pt({0.9, -0.2}), pt({0.2, 0.8})});
  const auto u = make_gaussian(2);
  const int anchor = 0;
  auto integrand = [&](const Point& x) {
    const double gauge = s.gauge(anchor, x);
    return pair(*u->gradient(x), s.vertex(anchor) - x) * (1.0 / (gauge * gauge) - 1.0);
  };
  const double coned = integrate_vertex_cone([&](double, const Point&, const Point& x) { return integrand(x); }, s,
                                             anchor, ConeRule::make(2, 16, 20));
  const auto v = [&](int i) { return std::array<double, 2>{s.vertex(i)(0), s.vertex(i)(1)}; };
  const double oracle = testing::AdaptiveTriangle::integrate(
      [&](double x, double y) { return integrand(pt({x, y})); }, v(0), v(1), v(2), 1e-11);
  CHECK(std::abs(coned - oracle) <= 1e-8);
}

TEST_CASE("ball averages") {
  for (int n = 1; n <= 3; ++n) {
    const auto rule = BallRule::make(n, 10, 10);
    const Point c = Point::Constant(n, 0.3);
    CHECK(average_over_ball([](double, const Point&, const Point&) { return 1.0; }, c, 2.0, rule) ==
          doctest::Approx(1.0).epsilon(1e-14));
    // ⨍_{B_R} |x - c|^2 = n R^2 / (n + 2)
    const double m2 = average_over_ball(
        [&](double, const Point&, const Point& x) { return (x - c).squaredNorm(); }, c, 2.0, rule);
    CHECK(m2 == doctest::Approx(n * 4.0 / (n + 2.0)).epsilon(1e-13));
  }
  CHECK_THROWS(SphereRule::make(4, 3));
}
