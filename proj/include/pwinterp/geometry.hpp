#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pwinterp/types.hpp"

namespace pwinterp {

/// Signed volume det[a_1 - a_0, ..., a_n - a_0] / n! of n+1 points in R^n.
/// Degenerate input gives 0; a vertex count that does not match the ambient
/// dimension throws DimensionError.
double signed_volume(std::span<const Point> vertices);

/// A nondegenerate n-simplex in R^n, 1 <= n <= kMaxDim.
///
/// The inverse of the (n+1)x(n+1) vertex matrix [a_0 ... a_n; 1 ... 1] is
/// computed once at construction. Its rows are the affine barycentric
/// coordinate functions, so barycentric() is a single mat-vec and the
/// differentials are read off the first n columns.
class Simplex {
 public:
  using VertexMatrix =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim + 1, kMaxDim + 1>;

  /// Rejects |signed volume| < kDegeneracyFloor * diam^n.
  explicit Simplex(std::span<const Point> vertices);
  Simplex(std::initializer_list<Point> vertices)
      : Simplex(std::span<const Point>(vertices.begin(), vertices.size())) {}

  static constexpr double kDegeneracyFloor = 1e-12;

  int dim() const { return dim_; }
  int vertex_count() const { return dim_ + 1; }
  const Point& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  std::span<const Point> vertices() const { return {vertices_.data(), static_cast<std::size_t>(dim_ + 1)}; }

  double signed_volume() const { return signed_volume_; }
  double volume() const;
  double diameter() const { return diameter_; }
  Point centroid() const;

  BarycentricCoords barycentric(const Point& x) const;
  /// Dβ_i; constant since β_i is affine. Sum over i is zero.
  const Covector& barycentric_differential(int i) const {
    return differentials_[static_cast<std::size_t>(i)];
  }
  std::span<const Covector> barycentric_differentials() const {
    return {differentials_.data(), static_cast<std::size_t>(dim_ + 1)};
  }

  /// Minkowski gauge of the simplex about vertex i: 1 - β_i(x).
  double gauge(int i, const Point& x) const;

  /// Point with the given barycentric coordinates.
  Point from_barycentric(const BarycentricCoords& beta) const;

 private:
  int dim_ = 0;
  std::array<Point, kMaxDim + 1> vertices_{};
  std::array<Covector, kMaxDim + 1> differentials_{};
  VertexMatrix inverse_;
  double signed_volume_ = 0.0;
  double diameter_ = 0.0;
};

double diameter(std::span<const Point> vertices);

/// Minkowski gauge of the ball B_radius(center): |x - center| / radius.
double gauge_ball(const Point& center, double radius, const Point& x);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

}  // namespace pwinterp
