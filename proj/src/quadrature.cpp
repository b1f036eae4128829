#include "pwinterp/quadrature.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace pwinterp {

GaussRule01 gauss_jacobi01(int points, double alpha) {
  if (points < 1) throw QuadratureError("Gauss rule needs at least one point");
  if (!(alpha > -1.0)) throw QuadratureError("Jacobi exponent must exceed -1");
  // Jacobi matrix on [-1,1] for (1-x)^alpha (1+x)^beta with beta = 0.
  const double a = alpha;
  const double b = 0.0;
  Eigen::VectorXd diag(points);
  Eigen::VectorXd off(std::max(points - 1, 0));
  for (int k = 0; k < points; ++k) {
    const double s = 2.0 * k + a + b;
    diag(k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < points; ++k) {
    const double s = 2.0 * k + a + b;
    const double num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
    const double den = s * s * (s + 1.0) * (s - 1.0);
    off(k - 1) = std::sqrt(num / den);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw QuadratureError("Golub-Welsch eigensolve failed");

  GaussRule01 rule;
  rule.nodes.resize(static_cast<std::size_t>(points));
  rule.weights.resize(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double v0 = solver.eigenvectors()(0, k);
    rule.nodes[static_cast<std::size_t>(k)] = 0.5 * (1.0 + solver.eigenvalues()(k));
    rule.weights[static_cast<std::size_t>(k)] = v0 * v0;
  }
  const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
  for (auto& w : rule.weights) w /= total;
  return rule;
}

SimplexRule SimplexRule::conical(int dim, int points_per_direction) {
  if (dim < 0 || dim > kMaxDim) throw DimensionError("simplex rule dimension unsupported");
  if (points_per_direction < 1) throw QuadratureError("simplex rule needs at least one point per direction");
  SimplexRule rule;
  rule.dim_ = dim;
  rule.degree_ = dim == 0 ? 1000 : 2 * points_per_direction - 1;
  rule.lambda_.assign(static_cast<std::size_t>(dim + 1), {});
  if (dim == 0) {
    rule.weights_ = {1.0};
    rule.lambda_[0] = {1.0};
    return rule;
  }
  // Direction k (0-based) carries the Jacobian factor (1-u_k)^(dim-1-k).
  std::vector<GaussRule01> directions;
  for (int k = 0; k < dim; ++k) directions.push_back(gauss_jacobi01(points_per_direction, dim - 1 - k));

  std::vector<int> index(static_cast<std::size_t>(dim), 0);
  const auto m = static_cast<std::size_t>(points_per_direction);
  while (true) {
    double w = 1.0;
    double remaining = 1.0;
    std::vector<double> coords(static_cast<std::size_t>(dim + 1), 0.0);
    for (int k = 0; k < dim; ++k) {
      const auto& dir = directions[static_cast<std::size_t>(k)];
      const auto ik = static_cast<std::size_t>(index[static_cast<std::size_t>(k)]);
      w *= dir.weights[ik];
      coords[static_cast<std::size_t>(k)] = remaining * dir.nodes[ik];
      remaining *= 1.0 - dir.nodes[ik];
    }
    coords[static_cast<std::size_t>(dim)] = remaining;
    rule.weights_.push_back(w);
    for (int i = 0; i <= dim; ++i) rule.lambda_[static_cast<std::size_t>(i)].push_back(coords[static_cast<std::size_t>(i)]);

    int k = dim - 1;
    while (k >= 0 && static_cast<std::size_t>(index[static_cast<std::size_t>(k)]) + 1 == m) {
      index[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
    ++index[static_cast<std::size_t>(k)];
  }
  return rule;
}

SimplexRule SimplexRule::of_degree(int dim, int degree) {
  if (degree < 0) throw QuadratureError("negative rule degree");
  return conical(dim, std::max(1, (degree + 2) / 2));
}

ConeRule ConeRule::standard(int n) { return make(n, 10, 8); }

ConeRule ConeRule::make(int n, int radial_points, int facet_degree) {
  if (n < 1 || n > kMaxDim) throw DimensionError("cone rule dimension unsupported");
  return ConeRule{gauss_legendre01(radial_points), SimplexRule::of_degree(n - 1, facet_degree)};
}

SphereRule SphereRule::make(int n, int resolution) {
  if (resolution < 1) throw QuadratureError("sphere rule resolution must be positive");
  SphereRule rule;
  switch (n) {
    case 1:
      rule.directions = {Point::Constant(1, -1.0), Point::Constant(1, 1.0)};
      rule.weights = {0.5, 0.5};
      break;
    case 2: {
      // Periodic trapezoid rule, exact for trigonometric degree < 2 * resolution.
      const int m = 2 * resolution;
      for (int k = 0; k < m; ++k) {
        const double theta = 2.0 * std::numbers::pi * (k + 0.5) / m;
        Point d(2);
        d << std::cos(theta), std::sin(theta);
        rule.directions.push_back(d);
        rule.weights.push_back(1.0 / m);
      }
      break;
    }
    case 3: {
      // Gauss-Legendre in z (Archimedes: z is uniform on the sphere) times trapezoid in phi.
      const auto z_rule = gauss_legendre01(resolution);
      const int m = 2 * resolution;
      for (std::size_t i = 0; i < z_rule.size(); ++i) {
        const double z = 2.0 * z_rule.nodes[i] - 1.0;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int k = 0; k < m; ++k) {
          const double phi = 2.0 * std::numbers::pi * (k + 0.5) / m;
          Point d(3);
          d << rho * std::cos(phi), rho * std::sin(phi), z;
          rule.directions.push_back(d);
          rule.weights.push_back(z_rule.weights[i] / m);
        }
      }
      break;
    }
    default:
      throw DimensionError("sphere rules are available for n <= 3");
  }
  return rule;
}

BallRule BallRule::make(int n, int radial_points, int angular_resolution) {
  return BallRule{gauss_legendre01(radial_points), SphereRule::make(n, angular_resolution)};
}

}  // namespace pwinterp
