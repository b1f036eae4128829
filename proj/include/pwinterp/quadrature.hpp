#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "pwinterp/geometry.hpp"
#include "pwinterp/types.hpp"

namespace pwinterp {

/// Gauss rule on [0,1] for the weight (1-u)^alpha, weights normalized to sum 1.
/// Computed by Golub-Welsch from the Jacobi recurrence; exact for polynomials
/// of degree 2*points-1 against the weight.
struct GaussRule01 {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

GaussRule01 gauss_jacobi01(int points, double alpha);
inline GaussRule01 gauss_legendre01(int points) { return gauss_jacobi01(points, 0.0); }

/// Rule on the reference d-simplex against its normalized measure. Nodes are
/// stored as barycentric coordinates, one array per vertex.
///
/// Built as a collapsed (conical) product of Gauss-Jacobi rules, which works
/// in every dimension and is exact up to degree 2m-1 for m points per
/// direction. Nodes lie strictly inside the simplex.
class SimplexRule {
 public:
  static SimplexRule conical(int dim, int points_per_direction);
  /// Smallest conical rule exact to the requested polynomial degree.
  static SimplexRule of_degree(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  /// Barycentric coordinate i of every node.
  std::span<const double> coordinate(int i) const { return lambda_[static_cast<std::size_t>(i)]; }
  double coordinate(int i, std::size_t node) const { return lambda_[static_cast<std::size_t>(i)][node]; }

 private:
  int dim_ = 0;
  int degree_ = 0;
  std::vector<double> weights_;
  std::vector<std::vector<double>> lambda_;
};

/// Radial Gauss-Legendre rule times a rule on the facet opposite the anchor
/// vertex. Used for integrands singular at the anchor.
struct ConeRule {
  GaussRule01 radial;
  SimplexRule facet;

  /// Defaults: 10 radial points, facet rule of degree 8.
  static ConeRule standard(int n);
  static ConeRule make(int n, int radial_points, int facet_degree);
};

/// Directions on S^{n-1} with weights summing to 1 (normalized surface measure).
struct SphereRule {
  std::vector<Point> directions;
  std::vector<double> weights;

  static SphereRule make(int n, int resolution);
};

struct BallRule {
  GaussRule01 radial;
  SphereRule sphere;

  static BallRule make(int n, int radial_points, int angular_resolution);
};

namespace detail {

inline void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw QuadratureError(std::string("non-finite integrand value in ") + what);
}

// Radial nodes are never placed below this.
inline constexpr double kMinRadialNode = 1e-14;
inline constexpr double kOverflowGuard = 1e300;

}  // namespace detail

/// vol(s) * sum_k w_k f(x_k). f: (const Point&) -> double.
template <class F>
double integrate_simplex(F&& f, const Simplex& s, const SimplexRule& rule) {
  if (rule.dim() != s.dim()) throw DimensionError("rule dimension does not match simplex");
  const int n = s.dim();
  double sum = 0.0;
  Point x(n);
  for (std::size_t k = 0; k < rule.size(); ++k) {
    x.setZero();
    for (int i = 0; i <= n; ++i) x += rule.coordinate(i, k) * s.vertex(i);
    const double v = f(static_cast<const Point&>(x));
    detail::check_finite(v, "integrate_simplex");
    sum += rule.weights()[k] * v;
  }
  return s.volume() * sum;
}

/// Integral over s in cone coordinates about vertex i: x = a_i + t (xi - a_i)
/// with xi on the opposite facet and gauge 1 - β_i(x) = t, so that
///   ∫_s f = n vol(s) ∫_0^1 t^{n-1} ⨍_facet g(t, xi) dxi dt.
/// g: (double t, const Point& xi, const Point& x) -> double. g t^{n-1} must be
/// bounded near t = 0.
template <class G>
double integrate_vertex_cone(G&& g, const Simplex& s, int anchor, const ConeRule& rule) {
  const int n = s.dim();
  if (rule.facet.dim() != n - 1) throw DimensionError("cone facet rule has wrong dimension");
  if (anchor < 0 || anchor > n) throw DimensionError("cone anchor is not a vertex index");
  const Point& a = s.vertex(anchor);
  std::array<const Point*, kMaxDim> facet{};
  for (int i = 0, j = 0; i <= n; ++i) {
    if (i != anchor) facet[static_cast<std::size_t>(j++)] = &s.vertex(i);
  }
  double sum = 0.0;
  Point xi(n);
  Point x(n);
  for (std::size_t m = 0; m < rule.facet.size(); ++m) {
    xi.setZero();
    for (int j = 0; j < n; ++j) xi += rule.facet.coordinate(j, m) * *facet[static_cast<std::size_t>(j)];
    double radial_sum = 0.0;
    for (std::size_t k = 0; k < rule.radial.size(); ++k) {
      const double t = rule.radial.nodes[k];
      if (t < detail::kMinRadialNode) throw QuadratureError("radial node too close to the cone apex");
      x = a + t * (xi - a);
      const double v = g(t, static_cast<const Point&>(xi), static_cast<const Point&>(x)) * std::pow(t, n - 1);
      if (!std::isfinite(v) || std::abs(v) > detail::kOverflowGuard) {
        throw QuadratureError("integrand blow-up at the cone apex");
      }
      radial_sum += rule.radial.weights[k] * v;
    }
    sum += rule.facet.weights()[m] * radial_sum;
  }
  return n * s.volume() * sum;
}

/// Average over the ball B_radius(center) in polar coordinates,
///   ⨍_B f = n ∫_0^1 rho^{n-1} ⨍_sphere g(rho, omega) domega drho.
/// g: (double rho, const Point& omega, const Point& x) -> double.
template <class G>
double average_over_ball(G&& g, const Point& center, double radius, const BallRule& rule) {
  const auto n = static_cast<int>(center.size());
  if (!(radius > 0.0)) throw Error("ball radius must be positive");
  if (rule.sphere.directions.empty() || rule.sphere.directions.front().size() != n) {
    throw DimensionError("ball rule dimension does not match centre");
  }
  double sum = 0.0;
  for (std::size_t m = 0; m < rule.sphere.directions.size(); ++m) {
    const Point& omega = rule.sphere.directions[m];
    double radial_sum = 0.0;
    for (std::size_t k = 0; k < rule.radial.size(); ++k) {
      const double rho = rule.radial.nodes[k];
      const Point x = center + (rho * radius) * omega;
      const double v = g(rho, omega, x) * std::pow(rho, n - 1);
      if (!std::isfinite(v) || std::abs(v) > detail::kOverflowGuard) {
        throw QuadratureError("integrand blow-up at the ball centre");
      }
      radial_sum += rule.radial.weights[k] * v;
    }
    sum += rule.sphere.weights[m] * radial_sum;
  }
  return n * sum;
}

}  // namespace pwinterp
