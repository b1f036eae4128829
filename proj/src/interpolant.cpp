#include <array>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "pwinterp/fields.hpp"

namespace pwinterp {

struct InterpolantField::Cache {
  static constexpr std::size_t kShards = 16;

  struct Shard {
    mutable std::shared_mutex mutex;
    std::unordered_map<LatticePoint, double, LatticePointHash, LatticePointEqual> values;
  };

  // Dense block [first, last] filled by prefetch(); read-only afterwards.
  LatticePoint first;
  LatticePoint last;
  std::array<std::int64_t, kMaxDim> strides{};
  std::vector<double> dense;

  std::array<Shard, kShards> shards;

  bool dense_index(const LatticePoint& z, std::size_t& index) const {
    if (dense.empty()) return false;
    std::int64_t offset = 0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      if (z(i) < first(i) || z(i) > last(i)) return false;
      offset += (z(i) - first(i)) * strides[static_cast<std::size_t>(i)];
    }
    index = static_cast<std::size_t>(offset);
    return true;
  }
};

InterpolantField::InterpolantField(FieldPtr source, TriangulationFrame frame)
    : source_(std::move(source)), frame_(std::move(frame)), cache_(std::make_unique<Cache>()) {
  if (!source_) throw Error("interpolant needs a source field");
  if (source_->dim() != frame_.dim()) throw DimensionError("field and frame dimensions differ");
}

InterpolantField::~InterpolantField() = default;
InterpolantField::InterpolantField(InterpolantField&&) noexcept = default;
InterpolantField& InterpolantField::operator=(InterpolantField&&) noexcept = default;

double InterpolantField::compute_vertex_value(const LatticePoint& z) const {
  const Point a = frame_.vertex_position(z);
  if (source_->field_class() == FieldClass::bv_indicator &&
      source_->singular_distance(a) < kLebesgueGuard * frame_.scale()) {
    throw LebesgueGuardError("triangulation vertex lies on the discontinuity set of " + source_->name() +
                             "; resample the frame offset");
  }
  return source_->value(a);
}

void InterpolantField::prefetch(const Box& domain) {
  const int n = frame_.dim();
  Cache& c = *cache_;
  // Cubes meeting the domain, plus their far corners.
  LatticePoint first(n), last(n);
  bool any = false;
  for_each_cube_in_box(frame_, domain, [&](const LatticePoint& z) {
    if (!any) {
      first = z;
      last = z;
      any = true;
    } else {
      first = first.cwiseMin(z);
      last = last.cwiseMax(z);
    }
  });
  if (!any) return;
  last.array() += 1;

  std::array<std::int64_t, kMaxDim> strides{};
  std::int64_t total = 1;
  for (int i = n - 1; i >= 0; --i) {
    strides[static_cast<std::size_t>(i)] = total;
    total *= last(i) - first(i) + 1;
  }
  std::vector<double> dense(static_cast<std::size_t>(total));
  LatticePoint z = first;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    dense[static_cast<std::size_t>(idx)] = compute_vertex_value(z);
    int axis = n - 1;
    while (axis >= 0 && z(axis) == last(axis)) {
      z(axis) = first(axis);
      --axis;
    }
    if (axis >= 0) ++z(axis);
  }
  c.first = first;
  c.last = last;
  c.strides = strides;
  c.dense = std::move(dense);
}

double InterpolantField::vertex_value(const LatticePoint& z) const {
  if (z.size() != frame_.dim()) throw DimensionError("lattice point dimension mismatch");
  const Cache& c = *cache_;
  std::size_t index = 0;
  if (c.dense_index(z, index)) return c.dense[index];

  auto& shard = cache_->shards[LatticePointHash{}(z) % Cache::kShards];
  {
    std::shared_lock lock(shard.mutex);
    if (auto it = shard.values.find(z); it != shard.values.end()) return it->second;
  }
  const double v = compute_vertex_value(z);
  std::unique_lock lock(shard.mutex);
  shard.values.insert_or_assign(z, v);
  return v;
}

double InterpolantField::value_in_cell(const CellKey& key, const Point& x) const {
  const Point y = frame_.to_lattice(x);
  const Point frac = y - key.base.cast<double>();
  const int n = frame_.dim();
  const auto beta = kuhn_barycentric(std::span<const std::int8_t>(key.perm.data(), static_cast<std::size_t>(n)), frac);
  const auto walk = kuhn_walk(key);
  double v = 0.0;
  for (int k = 0; k <= n; ++k) v += beta(k) * vertex_value(walk[static_cast<std::size_t>(k)]);
  return v;
}

double InterpolantField::value(const Point& x) const { return value_in_cell(locate(frame_, x), x); }

Covector InterpolantField::gradient(const CellKey& key) const {
  const int n = frame_.dim();
  if (key.dim() != n) throw DimensionError("cell key dimension mismatch");
  const auto walk = kuhn_walk(key);
  Covector g(n);
  double previous = vertex_value(walk[0]);
  for (int k = 0; k < n; ++k) {
    const double next = vertex_value(walk[static_cast<std::size_t>(k + 1)]);
    g(key.perm[static_cast<std::size_t>(k)]) = (next - previous) / frame_.spacing();
    previous = next;
  }
  return g;
}

Covector InterpolantField::gradient_via_barycentric(const CellKey& key) const {
  const Simplex s = simplex_of(frame_, key);
  const auto walk = kuhn_walk(key);
  Covector g = Covector::Zero(frame_.dim());
  for (int i = 0; i <= s.dim(); ++i) {
    g += vertex_value(walk[static_cast<std::size_t>(i)]) * s.barycentric_differential(i);
  }
  return g;
}

std::size_t InterpolantField::cached_vertex_count() const {
  std::size_t count = cache_->dense.size();
  for (auto& shard : cache_->shards) {
    std::shared_lock lock(shard.mutex);
    count += shard.values.size();
  }
  return count;
}

Covector affine_interpolant_gradient(const ScalarField& u, const Simplex& s) {
  Covector g = Covector::Zero(s.dim());
  for (int i = 0; i <= s.dim(); ++i) g += u.value(s.vertex(i)) * s.barycentric_differential(i);
  return g;
}

double affine_interpolant_value(const ScalarField& u, const Simplex& s, const Point& x) {
  const auto beta = s.barycentric(x);
  double v = 0.0;
  for (int i = 0; i <= s.dim(); ++i) v += u.value(s.vertex(i)) * beta(i);
  return v;
}

}  // namespace pwinterp
