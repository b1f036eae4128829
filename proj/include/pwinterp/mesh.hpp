#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pwinterp/geometry.hpp"
#include "pwinterp/types.hpp"

namespace pwinterp {

using LatticePoint = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& z) const noexcept;
};

struct LatticePointEqual {
  bool operator()(const LatticePoint& a, const LatticePoint& b) const noexcept {
    return a.size() == b.size() && (a.array() == b.array()).all();
  }
};

/// Axis-aligned box [lower, upper].
class Box {
 public:
  Box(Point lower, Point upper);
  static Box cube(int n, double lo, double hi);

  int dim() const { return static_cast<int>(lower_.size()); }
  const Point& lower() const { return lower_; }
  const Point& upper() const { return upper_; }
  double volume() const;
  bool contains(const Point& x) const;
  /// True when every side has positive length.
  bool has_interior() const;
  Box expanded(double margin) const;
  Box translated(const Point& v) const;
  Box scaled(double factor) const;
  /// Smallest box containing both.
  Box hull(const Box& other) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  Point lower_;
  Point upper_;
};

/// Kuhn (Freudenthal) triangulation of R^n scaled by sigma: every lattice cube
/// sigma * (z + [0,1]^n) splits into n! simplices, one per axis ordering.
/// With the default sigma = 1/sqrt(n) every simplex has diameter 1.
class BaseTriangulation {
 public:
  explicit BaseTriangulation(int n);
  BaseTriangulation(int n, double sigma);

  int dim() const { return dim_; }
  double sigma() const { return sigma_; }
  /// All axis orderings of {0..n-1} in lexicographic order.
  std::span<const std::array<std::int8_t, kMaxDim>> permutations() const { return permutations_; }
  std::size_t cells_per_cube() const { return permutations_.size(); }

 private:
  int dim_;
  double sigma_;
  std::vector<std::array<std::int8_t, kMaxDim>> permutations_;
};

/// Canonical index of one Kuhn simplex: base lattice point of its cube and the
/// axis order of the walk from that corner to the opposite one.
struct CellKey {
  LatticePoint base;
  std::array<std::int8_t, kMaxDim> perm{};

  int dim() const { return static_cast<int>(base.size()); }
  friend bool operator==(const CellKey& a, const CellKey& b) {
    return LatticePointEqual{}(a.base, b.base) && a.perm == b.perm;
  }
};

/// The frame S^r_h = { r * Sigma + h : Sigma in base }.
class TriangulationFrame {
 public:
  TriangulationFrame(BaseTriangulation base, double scale, Point offset);

  int dim() const { return base_.dim(); }
  const BaseTriangulation& base() const { return base_; }
  double scale() const { return scale_; }
  const Point& offset() const { return offset_; }
  /// Edge length of the lattice cubes, sigma * r.
  double spacing() const { return base_.sigma() * scale_; }
  double cell_diameter() const;
  double cell_volume() const;

  /// (x - h) / (sigma r)
  Point to_lattice(const Point& x) const;
  Point vertex_position(const LatticePoint& z) const;

 private:
  BaseTriangulation base_;
  double scale_;
  Point offset_;
};

/// Lattice coordinates of the n+1 vertices of a Kuhn cell.
std::array<LatticePoint, kMaxDim + 1> kuhn_walk(const CellKey& key);

/// Barycentric coordinates of fractional position f in [0,1]^n with respect to
/// the Kuhn simplex of the given axis order.
BarycentricCoords kuhn_barycentric(std::span<const std::int8_t> perm, const Point& frac);

/// Stable descending sort of the fractional parts; ties go to the lower axis.
CellKey locate(const TriangulationFrame& frame, const Point& x);

Simplex simplex_of(const TriangulationFrame& frame, const CellKey& key);

/// to_lattice with coordinates within rounding of an integer snapped to it, so
/// a box built from lattice vertices does not pick up slivers of its neighbours.
Point snapped_lattice(const TriangulationFrame& frame, const Point& x);

/// Whether the Kuhn cell meets the box given in lattice coordinates. With
/// open_test the interiors must overlap; otherwise closed sets are compared.
bool kuhn_cell_meets(std::span<const std::int8_t> perm, const LatticePoint& base, const Point& lo,
                     const Point& hi, bool open_test);

/// Visits every lattice cube that can hold a cell meeting the box, in
/// lexicographic order of the base point (last axis fastest).
void for_each_cube_in_box(const TriangulationFrame& frame, const Box& box,
                          const std::function<void(const LatticePoint&)>& visit);

/// Cells meeting the box, duplicate-free, in a deterministic order. For a box
/// with interior only cells whose interior meets it are returned; a degenerate
/// box uses closed intersection.
std::vector<CellKey> cells_in_box(const TriangulationFrame& frame, const Box& box);

std::vector<LatticePoint> lattice_vertices_in_box(const TriangulationFrame& frame, const Box& box);
std::vector<Point> vertices_in_box(const TriangulationFrame& frame, const Box& box);

}  // namespace pwinterp
