#include <algorithm>
#include <limits>

#include "pwinterp/analysis.hpp"
#include "pwinterp/parallel.hpp"
#include "pwinterp/sampling.hpp"

namespace pwinterp {

double total_variation(const InterpolantField& v, const Box& domain) {
  const TriangulationFrame& frame = v.frame();
  const int n = frame.dim();
  if (domain.dim() != n) throw DimensionError("domain dimension does not match frame");
  const bool open_test = domain.has_interior();
  const Point lo = snapped_lattice(frame, domain.lower());
  const Point hi = snapped_lattice(frame, domain.upper());
  const double cell_volume = frame.cell_volume();
  CompensatedSum tv;
  for_each_cube_in_box(frame, domain, [&](const LatticePoint& z) {
    for (const auto& perm : frame.base().permutations()) {
      if (!kuhn_cell_meets(std::span<const std::int8_t>(perm.data(), static_cast<std::size_t>(n)), z, lo, hi,
                           open_test)) {
        continue;
      }
      tv.add(v.gradient(CellKey{z, perm}).norm() * cell_volume);
    }
  });
  return tv.value();
}

BvStatistics bv_counterexample(double r, std::size_t samples, std::uint64_t seed, std::size_t threads) {
  if (!(r > 0.0)) throw Error("scale r must be positive");
  if (samples < 1) throw Error("bv_counterexample needs at least one sample");
  const FieldPtr u = make_reference_indicator();
  constexpr std::size_t kMaxAttempts = 64;

  struct Outcome {
    std::optional<double> tv;
    Point h;
    std::size_t rejected = 0;
  };
  std::vector<Outcome> outcomes(samples);
  parallel_for(
      samples,
      [&](std::size_t i) {
        SeededStream rng(seed, i, 0);
        Outcome& o = outcomes[i];
        for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
          const Point h = rng.in_ball(2, r);
          InterpolantField v(u, TriangulationFrame(BaseTriangulation(2), r, h));
          const Box domain = u->support().expanded(v.frame().cell_diameter());
          try {
            v.prefetch(domain);
            o.tv = total_variation(v, domain);
            o.h = h;
            return;
          } catch (const LebesgueGuardError&) {
            ++o.rejected;
          }
        }
      },
      threads);

  BvStatistics stats;
  stats.r = r;
  stats.samples = samples;
  stats.seed = seed;
  stats.exact_tv = *u->exact_total_variation();
  stats.min_tv = std::numeric_limits<double>::infinity();
  stats.max_tv = -std::numeric_limits<double>::infinity();
  CompensatedSum sum;
  for (const auto& o : outcomes) {
    stats.rejected += o.rejected;
    if (!o.tv) continue;
    stats.sample_h.push_back(o.h);
    stats.sample_tv.push_back(*o.tv);
    sum.add(*o.tv);
    if (*o.tv < stats.min_tv) {
      stats.min_tv = *o.tv;
      stats.argmin_h = o.h;
    }
    stats.max_tv = std::max(stats.max_tv, *o.tv);
  }
  if (stats.sample_tv.empty()) throw LebesgueGuardError("every sampled offset was rejected by the Lebesgue guard");
  stats.mean_tv = std::clamp(sum.value() / static_cast<double>(stats.sample_tv.size()), stats.min_tv, stats.max_tv);
  return stats;
}

}  // namespace pwinterp
