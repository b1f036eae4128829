#include "pwinterp/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

namespace pwinterp {
namespace {

using EdgeMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

int checked_dimension(std::span<const Point> vertices) {
  if (vertices.empty()) {
    throw DimensionError("simplex needs at least two vertices");
  }
  const auto n = static_cast<int>(vertices.front().size());
  if (n < 1 || n > kMaxDim) {
    throw DimensionError("ambient dimension " + std::to_string(n) + " outside [1, " +
                         std::to_string(kMaxDim) + "]");
  }
  if (static_cast<int>(vertices.size()) != n + 1) {
    throw DimensionError("expected " + std::to_string(n + 1) + " vertices in R^" + std::to_string(n) +
                         ", got " + std::to_string(vertices.size()));
  }
  for (const auto& v : vertices) {
    if (v.size() != n) throw DimensionError("vertices of mixed dimension");
    if (!v.allFinite()) throw DimensionError("non-finite vertex coordinate");
  }
  return n;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

double signed_volume(std::span<const Point> vertices) {
  const int n = checked_dimension(vertices);
  EdgeMatrix edges(n, n);
  for (int j = 0; j < n; ++j) edges.col(j) = vertices[static_cast<std::size_t>(j + 1)] - vertices[0];
  return edges.determinant() / factorial(n);
}

double diameter(std::span<const Point> vertices) {
  double d = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      d = std::max(d, (vertices[i] - vertices[j]).norm());
    }
  }
  return d;
}

Simplex::Simplex(std::span<const Point> vertices) {
  dim_ = checked_dimension(vertices);
  const int n = dim_;
  for (int i = 0; i <= n; ++i) vertices_[static_cast<std::size_t>(i)] = vertices[static_cast<std::size_t>(i)];
  diameter_ = pwinterp::diameter(vertices);
  signed_volume_ = pwinterp::signed_volume(vertices);
  if (!(diameter_ > 0.0) || !(std::abs(signed_volume_) >= kDegeneracyFloor * std::pow(diameter_, n))) {
    throw DegenerateSimplexError("degenerate simplex: |volume| = " + std::to_string(std::abs(signed_volume_)) +
                                 ", diameter = " + std::to_string(diameter_));
  }

  VertexMatrix m(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    m.block(0, i, n, 1) = vertices_[static_cast<std::size_t>(i)];
    m(n, i) = 1.0;
  }
  Eigen::FullPivLU<VertexMatrix> lu(m);
  if (!lu.isInvertible()) throw DegenerateSimplexError("singular vertex matrix");
  inverse_ = lu.inverse();
  for (int i = 0; i <= n; ++i) {
    differentials_[static_cast<std::size_t>(i)] = inverse_.block(i, 0, 1, n);
  }
}

double Simplex::volume() const { return std::abs(signed_volume_); }

Point Simplex::centroid() const {
  Point c = Point::Zero(dim_);
  for (int i = 0; i <= dim_; ++i) c += vertex(i);
  return c / static_cast<double>(dim_ + 1);
}

BarycentricCoords Simplex::barycentric(const Point& x) const {
  if (x.size() != dim_) throw DimensionError("point dimension does not match simplex");
  BarycentricCoords rhs(dim_ + 1);
  rhs.head(dim_) = x;
  rhs(dim_) = 1.0;
  return inverse_ * rhs;
}

double Simplex::gauge(int i, const Point& x) const {
  if (x.size() != dim_) throw DimensionError("point dimension does not match simplex");
  // Row i of the inverse is the affine map x -> β_i(x).
  return 1.0 - (pair(differentials_[static_cast<std::size_t>(i)], x) + inverse_(i, dim_));
}

Point Simplex::from_barycentric(const BarycentricCoords& beta) const {
  Point x = Point::Zero(dim_);
  for (int i = 0; i <= dim_; ++i) x += beta(i) * vertex(i);
  return x;
}

double gauge_ball(const Point& center, double radius, const Point& x) {
  if (!(radius > 0.0)) throw Error("ball radius must be positive");
  if (center.size() != x.size()) throw DimensionError("point dimension does not match ball centre");
  return (x - center).norm() / radius;
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace pwinterp
