#include <cmath>
#include <sstream>

#include "pwinterp/analysis.hpp"

namespace pwinterp {
namespace {

Covector require_gradient(const ScalarField& u, const Point& x) {
  auto g = u.gradient(x);
  if (!g) throw Error("field " + u.name() + " has no pointwise gradient; the identity needs a Sobolev field");
  return *g;
}

LemmaResidual lemma1_on_simplex(const ScalarField& u, const SimplexRegion& region, const LemmaOptions& options) {
  const Simplex& s = region.simplex;
  const int n = s.dim();
  const int i = region.vertex;
  if (i < 0 || i > n) throw DimensionError("lemma base point is not a vertex of the simplex");
  const Point& a = s.vertex(i);

  const auto volume_rule = SimplexRule::of_degree(n, options.volume_degree);
  const double mean = integrate_simplex([&](const Point& x) { return u.value(x); }, s, volume_rule) / s.volume();

  const auto cone = ConeRule::make(n, options.radial_points, options.facet_degree);
  const double integral = integrate_vertex_cone(
      [&](double, const Point&, const Point& x) {
        const double gauge = s.gauge(i, x);
        return pair(require_gradient(u, x), a - x) * (1.0 / std::pow(gauge, n) - 1.0);
      },
      s, i, cone);

  LemmaResidual out;
  out.lhs = u.value(a) - mean;
  out.rhs = integral / (n * s.volume());
  out.residual = std::abs(out.lhs - out.rhs);
  std::ostringstream ctx;
  ctx << "simplex n=" << n << " vertex=" << i << " field=" << u.name();
  out.context = ctx.str();
  return out;
}

LemmaResidual lemma1_on_ball(const ScalarField& u, const BallRegion& region, const LemmaOptions& options) {
  const auto n = static_cast<int>(region.center.size());
  const Point& a = region.center;
  const double radius = region.radius;
  const auto rule = BallRule::make(n, options.ball_radial_points, options.ball_angular_resolution);

  const double mean = average_over_ball([&](double, const Point&, const Point& x) { return u.value(x); }, a, radius,
                                        rule);
  const double average = average_over_ball(
      [&](double, const Point&, const Point& x) {
        const double gauge = gauge_ball(a, radius, x);
        return pair(require_gradient(u, x), a - x) * (1.0 / std::pow(gauge, n) - 1.0);
      },
      a, radius, rule);

  LemmaResidual out;
  out.lhs = u.value(a) - mean;
  out.rhs = average / n;
  out.residual = std::abs(out.lhs - out.rhs);
  std::ostringstream ctx;
  ctx << "ball n=" << n << " radius=" << radius << " field=" << u.name();
  out.context = ctx.str();
  return out;
}

}  // namespace

LemmaResidual check_lemma1(const ScalarField& u, const LemmaRegion& region, const LemmaOptions& options) {
  return std::visit(
      [&](const auto& r) -> LemmaResidual {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, SimplexRegion>) {
          if (r.simplex.dim() != u.dim()) throw DimensionError("field and simplex dimensions differ");
          return lemma1_on_simplex(u, r, options);
        } else {
          if (r.center.size() != u.dim()) throw DimensionError("field and ball dimensions differ");
          if (!(r.radius > 0.0)) throw Error("ball radius must be positive");
          return lemma1_on_ball(u, r, options);
        }
      },
      region);
}

Covector kernel_term(const Simplex& s, int i, const Point& x, const Covector& l) {
  const int n = s.dim();
  const double gauge = s.gauge(i, x);
  if (!(gauge > 0.0)) throw Error("kernel is singular at the simplex vertex");
  const double factor = (1.0 / std::pow(gauge, n) - 1.0) * pair(l, s.vertex(i) - x) / n;
  return factor * s.barycentric_differential(i);
}

Covector kernel_K(const Simplex& s, const Point& x, const Covector& l) {
  if (x.size() != s.dim() || l.size() != s.dim()) throw DimensionError("kernel argument dimension mismatch");
  Covector k = Covector::Zero(s.dim());
  for (int i = 0; i <= s.dim(); ++i) k += kernel_term(s, i, x, l);
  return k;
}

Covector kernel_average(const ScalarField& u, const Simplex& s, const LemmaOptions& options) {
  const int n = s.dim();
  if (u.dim() != n) throw DimensionError("field and simplex dimensions differ");
  const auto cone = ConeRule::make(n, options.radial_points, options.facet_degree);
  Covector total = Covector::Zero(n);
  // Term i is singular only at a_i, so it is integrated in cones about a_i.
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j < n; ++j) {
      total(j) += integrate_vertex_cone(
          [&](double, const Point&, const Point& x) { return kernel_term(s, i, x, require_gradient(u, x))(j); }, s,
          i, cone);
    }
  }
  return total / s.volume();
}

Lemma2Residual check_lemma2(const ScalarField& u, const Simplex& s, const LemmaOptions& options) {
  Lemma2Residual out;
  out.direct = affine_interpolant_gradient(u, s);
  out.kernel_average = kernel_average(u, s, options);
  out.lhs = out.direct.norm();
  out.rhs = out.kernel_average.norm();
  out.residual = (out.direct - out.kernel_average).norm();
  std::ostringstream ctx;
  ctx << "simplex n=" << s.dim() << " field=" << u.name();
  out.context = ctx.str();
  return out;
}

double mean_derivative_1d(const ScalarField& u, double a, double b, int points) {
  if (u.dim() != 1) throw DimensionError("mean_derivative_1d needs a field on R");
  if (!(b > a)) throw Error("interval must satisfy a < b");
  const auto rule = gauss_legendre01(points);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const Point x = Point::Constant(1, a + (b - a) * rule.nodes[k]);
    sum += rule.weights[k] * require_gradient(u, x)(0);
  }
  return sum;
}

}  // namespace pwinterp
