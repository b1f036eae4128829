#pragma once

#include <cstdint>
#include <random>

#include "pwinterp/geometry.hpp"
#include "pwinterp/types.hpp"

namespace pwinterp {

/// Deterministic random stream for one (seed, stream, substream) triple.
/// Uses std::seed_seq and std::mt19937_64, whose outputs the standard fixes,
/// and converts to doubles by hand so results do not depend on the library's
/// distribution implementations.
class SeededStream {
 public:
  SeededStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform in the open ball B_radius(0) of R^n (rejection from the cube).
  Point in_ball(int n, double radius);
  Point in_box(const Point& lo, const Point& hi);

 private:
  std::mt19937_64 engine_;
};

/// Random simplex with vertices in [lo, hi]^n whose volume is at least
/// `quality` times that of a regular simplex of the same diameter.
Simplex random_simplex(SeededStream& rng, int n, double lo, double hi, double quality = 0.05);

/// Volume of the regular n-simplex with unit edge.
double regular_simplex_volume(int n);

}  // namespace pwinterp
