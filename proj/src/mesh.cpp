#include "pwinterp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pwinterp {

std::size_t LatticePointHash::operator()(const LatticePoint& z) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    auto v = static_cast<std::uint64_t>(z(i));
    v ^= v >> 33;
    v *= 0xff51afd7ed558ccdULL;
    v ^= v >> 33;
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// Box

Box::Box(Point lower, Point upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() < 1) throw DimensionError("box corners of mixed dimension");
  if (!lower_.allFinite() || !upper_.allFinite()) throw Error("box corners must be finite");
  if ((lower_.array() > upper_.array()).any()) throw Error("box lower corner exceeds upper corner");
}

Box Box::cube(int n, double lo, double hi) {
  return Box(Point::Constant(n, lo), Point::Constant(n, hi));
}

double Box::volume() const { return (upper_ - lower_).prod(); }

bool Box::contains(const Point& x) const {
  return (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
}

bool Box::has_interior() const { return (upper_.array() > lower_.array()).all(); }

Box Box::expanded(double margin) const {
  return Box(lower_.array() - margin, upper_.array() + margin);
}

Box Box::translated(const Point& v) const { return Box(lower_ + v, upper_ + v); }

Box Box::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error("box scale factor must be positive");
  return Box(lower_ * factor, upper_ * factor);
}

Box Box::hull(const Box& other) const {
  return Box(lower_.cwiseMin(other.lower_), upper_.cwiseMax(other.upper_));
}

// ---------------------------------------------------------------------------
// Triangulation

BaseTriangulation::BaseTriangulation(int n) : BaseTriangulation(n, 1.0 / std::sqrt(static_cast<double>(n))) {}

BaseTriangulation::BaseTriangulation(int n, double sigma) : dim_(n), sigma_(sigma) {
  if (n < 1 || n > kMaxDim) throw DimensionError("triangulation dimension " + std::to_string(n) + " unsupported");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error("lattice normalization must be positive");
  std::array<std::int8_t, kMaxDim> p{};
  std::iota(p.begin(), p.begin() + n, std::int8_t{0});
  do {
    permutations_.push_back(p);
  } while (std::next_permutation(p.begin(), p.begin() + n));
}

TriangulationFrame::TriangulationFrame(BaseTriangulation base, double scale, Point offset)
    : base_(std::move(base)), scale_(scale), offset_(std::move(offset)) {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw Error("frame scale must be positive and finite");
  if (offset_.size() != base_.dim()) throw DimensionError("frame offset dimension mismatch");
  if (!offset_.allFinite()) throw Error("frame offset must be finite");
}

double TriangulationFrame::cell_diameter() const { return spacing() * std::sqrt(static_cast<double>(dim())); }

double TriangulationFrame::cell_volume() const {
  return std::pow(spacing(), dim()) / static_cast<double>(base_.cells_per_cube());
}

Point TriangulationFrame::to_lattice(const Point& x) const {
  if (x.size() != dim()) throw DimensionError("point dimension does not match frame");
  return (x - offset_) / spacing();
}

Point TriangulationFrame::vertex_position(const LatticePoint& z) const {
  return z.cast<double>() * spacing() + offset_;
}

std::array<LatticePoint, kMaxDim + 1> kuhn_walk(const CellKey& key) {
  const int n = key.dim();
  std::array<LatticePoint, kMaxDim + 1> walk{};
  walk[0] = key.base;
  for (int k = 0; k < n; ++k) {
    walk[static_cast<std::size_t>(k + 1)] = walk[static_cast<std::size_t>(k)];
    walk[static_cast<std::size_t>(k + 1)](key.perm[static_cast<std::size_t>(k)]) += 1;
  }
  return walk;
}

BarycentricCoords kuhn_barycentric(std::span<const std::int8_t> perm, const Point& frac) {
  const auto n = static_cast<int>(frac.size());
  BarycentricCoords beta(n + 1);
  beta(0) = 1.0 - frac(perm[0]);
  for (int k = 1; k < n; ++k) beta(k) = frac(perm[static_cast<std::size_t>(k - 1)]) - frac(perm[static_cast<std::size_t>(k)]);
  beta(n) = frac(perm[static_cast<std::size_t>(n - 1)]);
  return beta;
}

CellKey locate(const TriangulationFrame& frame, const Point& x) {
  if (!x.allFinite()) throw Error("cannot locate a non-finite point");
  const int n = frame.dim();
  const Point y = frame.to_lattice(x);
  CellKey key;
  key.base.resize(n);
  Point frac(n);
  for (int i = 0; i < n; ++i) {
    const double fl = std::floor(y(i));
    key.base(i) = static_cast<std::int64_t>(fl);
    frac(i) = y(i) - fl;
  }
  std::iota(key.perm.begin(), key.perm.begin() + n, std::int8_t{0});
  std::stable_sort(key.perm.begin(), key.perm.begin() + n,
                   [&](std::int8_t a, std::int8_t b) { return frac(a) > frac(b); });
  return key;
}

Simplex simplex_of(const TriangulationFrame& frame, const CellKey& key) {
  const int n = frame.dim();
  if (key.dim() != n) throw DimensionError("cell key dimension does not match frame");
  std::array<bool, kMaxDim> seen{};
  for (int k = 0; k < n; ++k) {
    const int axis = key.perm[static_cast<std::size_t>(k)];
    if (axis < 0 || axis >= n || seen[static_cast<std::size_t>(axis)]) {
      throw Error("cell key permutation is not a bijection");
    }
    seen[static_cast<std::size_t>(axis)] = true;
  }
  const auto walk = kuhn_walk(key);
  std::array<Point, kMaxDim + 1> verts;
  for (int k = 0; k <= n; ++k) verts[static_cast<std::size_t>(k)] = frame.vertex_position(walk[static_cast<std::size_t>(k)]);
  return Simplex(std::span<const Point>(verts.data(), static_cast<std::size_t>(n + 1)));
}

bool kuhn_cell_meets(std::span<const std::int8_t> perm, const LatticePoint& base, const Point& lo, const Point& hi,
                     bool open_test) {
  const auto n = static_cast<int>(base.size());
  // Chain 1 >= f_perm[0] >= ... >= f_perm[n-1] >= 0 against per-axis bounds.
  // Feasible iff every lower bound below position j stays under the upper
  // bound at j (strictly for the open test).
  double max_lower_below = -1.0;  // running max over positions k >= j
  for (int j = n - 1; j >= 0; --j) {
    const int axis = perm[static_cast<std::size_t>(j)];
    const double z = static_cast<double>(base(axis));
    const double lower = std::max(lo(axis) - z, 0.0);
    const double upper = std::min(hi(axis) - z, 1.0);
    max_lower_below = std::max(max_lower_below, lower);
    if (open_test ? !(max_lower_below < upper) : !(max_lower_below <= upper)) return false;
  }
  return true;
}

Point snapped_lattice(const TriangulationFrame& frame, const Point& x) {
  Point z = frame.to_lattice(x);
  for (int i = 0; i < z.size(); ++i) {
    const double nearest = std::round(z(i));
    if (std::abs(z(i) - nearest) <= 1e-10 * std::max(1.0, std::abs(nearest))) z(i) = nearest;
  }
  return z;
}

namespace {

void cube_range(const TriangulationFrame& frame, const Box& box, bool open_test, LatticePoint& first,
                LatticePoint& last, Point& lo, Point& hi) {
  const int n = frame.dim();
  if (box.dim() != n) throw DimensionError("box dimension does not match frame");
  lo = snapped_lattice(frame, box.lower());
  hi = snapped_lattice(frame, box.upper());
  first.resize(n);
  last.resize(n);
  for (int i = 0; i < n; ++i) {
    if (open_test) {
      first(i) = static_cast<std::int64_t>(std::floor(lo(i)));
      last(i) = static_cast<std::int64_t>(std::ceil(hi(i))) - 1;
    } else {
      first(i) = static_cast<std::int64_t>(std::ceil(lo(i))) - 1;
      last(i) = static_cast<std::int64_t>(std::floor(hi(i)));
    }
  }
}

template <class Visit>
void visit_lattice_range(const LatticePoint& first, const LatticePoint& last, Visit&& visit) {
  const auto n = static_cast<int>(first.size());
  if ((last.array() < first.array()).any()) return;
  LatticePoint z = first;
  while (true) {
    visit(z);
    int axis = n - 1;
    while (axis >= 0 && z(axis) == last(axis)) {
      z(axis) = first(axis);
      --axis;
    }
    if (axis < 0) return;
    ++z(axis);
  }
}

}  // namespace

void for_each_cube_in_box(const TriangulationFrame& frame, const Box& box,
                          const std::function<void(const LatticePoint&)>& visit) {
  LatticePoint first, last;
  Point lo, hi;
  cube_range(frame, box, box.has_interior(), first, last, lo, hi);
  visit_lattice_range(first, last, visit);
}

std::vector<CellKey> cells_in_box(const TriangulationFrame& frame, const Box& box) {
  const bool open_test = box.has_interior();
  LatticePoint first, last;
  Point lo, hi;
  cube_range(frame, box, open_test, first, last, lo, hi);
  std::vector<CellKey> cells;
  const int n = frame.dim();
  visit_lattice_range(first, last, [&](const LatticePoint& z) {
    for (const auto& perm : frame.base().permutations()) {
      const std::span<const std::int8_t> p(perm.data(), static_cast<std::size_t>(n));
      if (kuhn_cell_meets(p, z, lo, hi, open_test)) cells.push_back(CellKey{z, perm});
    }
  });
  return cells;
}

std::vector<LatticePoint> lattice_vertices_in_box(const TriangulationFrame& frame, const Box& box) {
  const int n = frame.dim();
  if (box.dim() != n) throw DimensionError("box dimension does not match frame");
  const Point lo = frame.to_lattice(box.lower());
  const Point hi = frame.to_lattice(box.upper());
  LatticePoint first(n), last(n);
  for (int i = 0; i < n; ++i) {
    first(i) = static_cast<std::int64_t>(std::ceil(lo(i))) - 1;
    last(i) = static_cast<std::int64_t>(std::floor(hi(i))) + 1;
  }
  std::vector<LatticePoint> out;
  visit_lattice_range(first, last, [&](const LatticePoint& z) {
    // Rounding in to_lattice can push a boundary vertex across; test in world coordinates.
    if (box.contains(frame.vertex_position(z))) out.push_back(z);
  });
  return out;
}

std::vector<Point> vertices_in_box(const TriangulationFrame& frame, const Box& box) {
  std::vector<Point> out;
  for (const auto& z : lattice_vertices_in_box(frame, box)) out.push_back(frame.vertex_position(z));
  return out;
}

}  // namespace pwinterp
