#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pwinterp/geometry.hpp"
#include "pwinterp/mesh.hpp"
#include "pwinterp/types.hpp"

namespace pwinterp {

enum class FieldClass { affine, smooth, bv_indicator };

std::string to_string(FieldClass c);

/// Pointwise-defined test function u : R^n -> R.
///
/// support() is the box outside which u (and Du) are treated as zero. Fields
/// without compact support (affine, quadratic) report a fixed window and are
/// only meaningful on it; the Gaussian reports the box where it drops below
/// 1e-16 and quantifies the discarded mass through tail_bound().
class ScalarField {
 public:
  virtual ~ScalarField() = default;

  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  virtual FieldClass field_class() const = 0;
  virtual double value(const Point& x) const = 0;
  /// Weak gradient where it is a function; empty for BV indicators.
  virtual std::optional<Covector> gradient(const Point& x) const = 0;
  virtual Box support() const = 0;

  /// Distance from x to the discontinuity set (infinite for continuous fields).
  virtual double singular_distance(const Point& /*x*/) const { return std::numeric_limits<double>::infinity(); }

  /// Upper bound on ∫ |u|^q + |Du|^p outside support().
  virtual double tail_bound(double /*p*/, double /*q*/) const { return 0.0; }

  /// Total variation |Du|(R^n) when known in closed form.
  virtual std::optional<double> exact_total_variation() const { return std::nullopt; }

  /// Values (and gradients, when grads is non-empty) at points given as n
  /// coordinate arrays. The default loops over value()/gradient().
  virtual void evaluate_batch(std::span<const double* const> coords, std::span<double> values,
                              std::span<double* const> grads) const;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

/// Nominal window reported as support() by fields that have none.
Box default_window(int n);

FieldPtr make_constant(int n, double c);
/// c + l[x]
FieldPtr make_affine(double c, Covector l);
/// 1/2 x^T A x + b[x] + c, A symmetric.
FieldPtr make_quadratic(Eigen::MatrixXd a, Covector b, double c);
/// |x|^2
FieldPtr make_norm_squared(int n);
/// exp(-|x|^2)
FieldPtr make_gaussian(int n);
/// exp(1 - 1/(1 - |x - c|^2 / R^2)) inside the ball, 0 outside.
FieldPtr make_bump(Point center, double radius);
/// Indicator of the closed triangle with the given vertices (R^2).
FieldPtr make_indicator_triangle(const Point& a, const Point& b, const Point& c);
/// Indicator of the triangle (0,0), (0,1), (1,0).
FieldPtr make_reference_indicator();

/// u(x / factor)
FieldPtr make_scaled(FieldPtr source, double factor);
/// u(x - shift)
FieldPtr make_translated(FieldPtr source, Point shift);

/// Names accepted by make_field, in a fixed order.
std::span<const std::string> field_names();
/// Canonical corpus member by name for dimension n; throws on unknown names
/// or dimensions the field does not exist in.
FieldPtr make_field(const std::string& name, int n);

/// Piecewise affine interpolant of a source field on a triangulation frame.
///
/// Vertex values are cached by lattice coordinate. prefetch() fills a dense
/// block covering a domain; other vertices go through a sharded concurrent
/// map (fill-or-read, last writer wins). Vertex values of BV fields are
/// guarded: a vertex within 1e-9 r of the discontinuity set raises
/// LebesgueGuardError.
class InterpolantField {
 public:
  InterpolantField(FieldPtr source, TriangulationFrame frame);
  ~InterpolantField();
  InterpolantField(InterpolantField&&) noexcept;
  InterpolantField& operator=(InterpolantField&&) noexcept;

  static constexpr double kLebesgueGuard = 1e-9;

  const TriangulationFrame& frame() const { return frame_; }
  const ScalarField& source() const { return *source_; }
  const FieldPtr& source_ptr() const { return source_; }

  /// Caches every vertex of every cell meeting the domain.
  void prefetch(const Box& domain);

  double vertex_value(const LatticePoint& z) const;
  /// Interpolated value at x on the cell locate(frame, x).
  double value(const Point& x) const;
  /// Affine extension of the cell's interpolant evaluated at x.
  double value_in_cell(const CellKey& key, const Point& x) const;
  /// Constant gradient on a cell, from differences along the Kuhn walk.
  Covector gradient(const CellKey& key) const;
  /// The same gradient through sum_i u(a_i) Dβ_i of the cell's simplex.
  Covector gradient_via_barycentric(const CellKey& key) const;

  std::size_t cached_vertex_count() const;

 private:
  struct Cache;

  double compute_vertex_value(const LatticePoint& z) const;

  FieldPtr source_;
  TriangulationFrame frame_;
  std::unique_ptr<Cache> cache_;
};

/// sum_i u(a_i) Dβ_i for a single simplex.
Covector affine_interpolant_gradient(const ScalarField& u, const Simplex& s);
/// sum_i u(a_i) β_i(x) for a single simplex.
double affine_interpolant_value(const ScalarField& u, const Simplex& s, const Point& x);

}  // namespace pwinterp
