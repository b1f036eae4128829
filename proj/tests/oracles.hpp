#pragma once

// Test-only reference integrators, independent of the library's quadrature.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "pwinterp/types.hpp"

namespace pwinterp::testing {

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// ⨍ over the reference d-simplex of prod_i λ_i^{alpha_i} (Dirichlet integral).
inline double monomial_mean(const std::vector<int>& alpha) {
  const int d = static_cast<int>(alpha.size()) - 1;
  double num = factorial(d);
  int total = 0;
  for (int a : alpha) {
    num *= factorial(a);
    total += a;
  }
  return num / factorial(d + total);
}

/// Adaptive red-refinement integrator on a triangle. Keeps splitting the cell
/// with the largest local error estimate (7-point Gauss vs its 4 children,
/// each with the same rule) until the summed estimate drops below tol. The
/// integrand is only sampled at interior points, so vertex singularities of
/// integrable strength are fine.
class AdaptiveTriangle {
 public:
  using Fn = std::function<double(double, double)>;

  static double integrate(const Fn& f, std::array<double, 2> a, std::array<double, 2> b, std::array<double, 2> c,
                          double tol, std::size_t max_cells = 400000) {
    struct Cell {
      std::array<std::array<double, 2>, 3> v;
      double value;
      double error;
      bool operator<(const Cell& o) const { return error < o.error; }
    };
    auto base = [&](const std::array<std::array<double, 2>, 3>& v) { return rule(f, v); };
    auto split = [](const std::array<std::array<double, 2>, 3>& v) {
      auto mid = [](const std::array<double, 2>& p, const std::array<double, 2>& q) {
        return std::array<double, 2>{0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])};
      };
      const auto m01 = mid(v[0], v[1]), m12 = mid(v[1], v[2]), m20 = mid(v[2], v[0]);
      return std::array<std::array<std::array<double, 2>, 3>, 4>{
          {{v[0], m01, m20}, {m01, v[1], m12}, {m20, m12, v[2]}, {m01, m12, m20}}};
    };
    auto make = [&](const std::array<std::array<double, 2>, 3>& v) {
      const double coarse = base(v);
      double fine = 0.0;
      for (const auto& child : split(v)) fine += base(child);
      return Cell{v, fine, std::abs(fine - coarse)};
    };

    std::priority_queue<Cell> queue;
    queue.push(make({a, b, c}));
    double total_error = queue.top().error;
    std::size_t cells = 1;
    while (total_error > tol && cells < max_cells) {
      const Cell worst = queue.top();
      queue.pop();
      total_error -= worst.error;
      for (const auto& child : split(worst.v)) {
        Cell cell = make(child);
        total_error += cell.error;
        queue.push(cell);
        ++cells;
      }
    }
    double sum = 0.0;
    while (!queue.empty()) {
      sum += queue.top().value;
      queue.pop();
    }
    return sum;
  }

 private:
  // Strang-Fix / Dunavant degree-5, 7-point rule.
  static double rule(const Fn& f, const std::array<std::array<double, 2>, 3>& v) {
    static constexpr double a1 = 0.797426985353087, b1 = 0.101286507323456;
    static constexpr double a2 = 0.059715871789770, b2 = 0.470142064105115;
    static constexpr double w0 = 0.225, w1 = 0.125939180544827, w2 = 0.132394152788506;
    const double area = 0.5 * std::abs((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) -
                                       (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]));
    auto at = [&](double l0, double l1, double l2) {
      return f(l0 * v[0][0] + l1 * v[1][0] + l2 * v[2][0], l0 * v[0][1] + l1 * v[1][1] + l2 * v[2][1]);
    };
    double s = w0 * at(1.0 / 3, 1.0 / 3, 1.0 / 3);
    s += w1 * (at(a1, b1, b1) + at(b1, a1, b1) + at(b1, b1, a1));
    s += w2 * (at(a2, b2, b2) + at(b2, a2, b2) + at(b2, b2, a2));
    return area * s;
  }
};

/// Central finite difference of a scalar function along axis j.
template <class F>
double central_difference(F&& f, Point x, int j, double step) {
  Point xp = x, xm = x;
  xp(j) += step;
  xm(j) -= step;
  return (f(xp) - f(xm)) / (2.0 * step);
}

inline Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

inline Covector cov(std::initializer_list<double> v) { return pt(v).transpose(); }

}  // namespace pwinterp::testing
