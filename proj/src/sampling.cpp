#include "pwinterp/sampling.hpp"

#include <array>
#include <cmath>

namespace pwinterp {

SeededStream::SeededStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(substream), static_cast<std::uint32_t>(substream >> 32)};
  engine_.seed(seq);
}

double SeededStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

Point SeededStream::in_ball(int n, double radius) {
  Point x(n);
  while (true) {
    for (int i = 0; i < n; ++i) x(i) = uniform(-1.0, 1.0);
    if (x.squaredNorm() < 1.0) return radius * x;
  }
}

Point SeededStream::in_box(const Point& lo, const Point& hi) {
  Point x(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i) x(i) = uniform(lo(i), hi(i));
  return x;
}

double regular_simplex_volume(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return std::sqrt((n + 1.0) / std::pow(2.0, n)) / f;
}

Simplex random_simplex(SeededStream& rng, int n, double lo, double hi, double quality) {
  std::array<Point, kMaxDim + 1> v;
  const auto count = static_cast<std::size_t>(n + 1);
  while (true) {
    for (std::size_t i = 0; i < count; ++i) v[i] = rng.in_box(Point::Constant(n, lo), Point::Constant(n, hi));
    const std::span<const Point> verts(v.data(), count);
    const double d = diameter(verts);
    if (!(d > 0.0)) continue;
    if (std::abs(signed_volume(verts)) >= quality * regular_simplex_volume(n) * std::pow(d, n)) {
      return Simplex(verts);
    }
  }
}

}  // namespace pwinterp
