#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "pwinterp/analysis.hpp"
#include "pwinterp/kernels.hpp"
#include "pwinterp/parallel.hpp"
#include "pwinterp/sampling.hpp"

namespace pwinterp {
namespace {

void check_exponent(double e, const char* what) {
  if (!(e >= 1.0) || !std::isfinite(e)) throw Error(std::string(what) + " exponent must be a finite value >= 1");
}

FieldPtr non_owning(const ScalarField& u) { return FieldPtr(FieldPtr{}, &u); }

// Scratch space for one cell's quadrature nodes, structure-of-arrays.
struct CellScratch {
  explicit CellScratch(int n, std::size_t nodes)
      : coords(static_cast<std::size_t>(n), std::vector<double>(nodes)),
        grads(static_cast<std::size_t>(n), std::vector<double>(nodes)),
        values(nodes),
        interpolated(nodes) {
    for (int j = 0; j < n; ++j) {
      coord_ptrs[static_cast<std::size_t>(j)] = coords[static_cast<std::size_t>(j)].data();
      grad_ptrs[static_cast<std::size_t>(j)] = grads[static_cast<std::size_t>(j)].data();
    }
  }

  std::vector<std::vector<double>> coords;
  std::vector<std::vector<double>> grads;
  std::vector<double> values;
  std::vector<double> interpolated;
  std::array<const double*, kMaxDim> coord_ptrs{};
  std::array<double*, kMaxDim> grad_ptrs{};
};

}  // namespace

Box default_domain(const ScalarField& u, const TriangulationFrame& frame) {
  return u.support().expanded(frame.cell_diameter());
}

ErrorReport interpolation_errors(const FieldPtr& u, const TriangulationFrame& frame, double p, double q,
                                 const Box& domain, bool with_gradient, const ErrorOptions& options) {
  if (!u) throw Error("interpolation_errors needs a field");
  check_exponent(p, "gradient");
  check_exponent(q, "value");
  const int n = frame.dim();
  if (u->dim() != n || domain.dim() != n) throw DimensionError("field, frame and domain dimensions differ");
  if (with_gradient && u->field_class() == FieldClass::bv_indicator) {
    throw Error("gradient error is undefined for BV field " + u->name() + ": it has no pointwise gradient");
  }

  InterpolantField v(u, frame);
  v.prefetch(domain);

  const auto& kern = kernels::active_kernels();
  const auto rule = SimplexRule::of_degree(n, options.cell_degree);
  const std::size_t nodes = rule.size();
  std::array<const double*, kMaxDim + 1> lambda{};
  for (int i = 0; i <= n; ++i) lambda[static_cast<std::size_t>(i)] = rule.coordinate(i).data();
  const std::span<const double* const> lambda_cols(lambda.data(), static_cast<std::size_t>(n + 1));
  const auto un = static_cast<std::size_t>(n);

  CellScratch scratch(n, nodes);
  const std::span<double* const> grad_out =
      with_gradient ? std::span<double* const>(scratch.grad_ptrs.data(), un) : std::span<double* const>{};

  const bool open_test = domain.has_interior();
  const Point lo = snapped_lattice(frame, domain.lower());
  const Point hi = snapped_lattice(frame, domain.upper());
  const double cell_volume = frame.cell_volume();

  CompensatedSum grad_sum;
  CompensatedSum value_sum;
  std::size_t cells = 0;
  std::array<double, kMaxDim + 1> vertex_values{};
  std::array<double, kMaxDim + 1> vertex_coord{};

  for_each_cube_in_box(frame, domain, [&](const LatticePoint& z) {
    for (const auto& perm : frame.base().permutations()) {
      const std::span<const std::int8_t> axes(perm.data(), un);
      if (!kuhn_cell_meets(axes, z, lo, hi, open_test)) continue;
      ++cells;
      const auto walk = kuhn_walk(CellKey{z, perm});
      for (int i = 0; i <= n; ++i) vertex_values[static_cast<std::size_t>(i)] = v.vertex_value(walk[static_cast<std::size_t>(i)]);

      // Quadrature nodes x_k = sum_i λ_i(k) a_i, one coordinate at a time.
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i <= n; ++i) {
          vertex_coord[static_cast<std::size_t>(i)] =
              static_cast<double>(walk[static_cast<std::size_t>(i)](j)) * frame.spacing() + frame.offset()(j);
        }
        kern.linear_combination(lambda_cols, std::span<const double>(vertex_coord.data(), un + 1), 0.0,
                                scratch.coords[static_cast<std::size_t>(j)]);
      }
      u->evaluate_batch(std::span<const double* const>(scratch.coord_ptrs.data(), un), scratch.values, grad_out);
      const bool flat = std::all_of(vertex_values.begin() + 1, vertex_values.begin() + n + 1,
                                    [&](double a) { return a == vertex_values[0]; });
      if (flat) {
        // Exact constant, so cells where u is locally constant contribute exactly zero.
        std::fill(scratch.interpolated.begin(), scratch.interpolated.end(), vertex_values[0]);
      } else {
        kern.linear_combination(lambda_cols, std::span<const double>(vertex_values.data(), un + 1), 0.0,
                                scratch.interpolated);
      }

      value_sum.add(cell_volume * kern.weighted_abs_pow_sum(rule.weights(), scratch.values, scratch.interpolated, q));
      if (with_gradient) {
        std::array<double, kMaxDim> g{};
        for (int k = 0; k < n; ++k) {
          g[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] =
              (vertex_values[static_cast<std::size_t>(k + 1)] - vertex_values[static_cast<std::size_t>(k)]) /
              frame.spacing();
        }
        grad_sum.add(cell_volume * kern.weighted_norm_pow_sum(
                                       rule.weights(), std::span<const double* const>(scratch.grad_ptrs.data(), un),
                                       std::span<const double>(g.data(), un), p));
      }
    }
  });

  ErrorReport report;
  report.r = frame.scale();
  report.h = frame.offset();
  report.p = p;
  report.q = q;
  report.grad_error_p = grad_sum.value();
  report.value_error_q = value_sum.value();
  report.domain = domain;
  report.cells_visited = cells;
  report.tail_bound = u->tail_bound(p, q);
  if (!std::isfinite(report.grad_error_p) || !std::isfinite(report.value_error_q)) {
    throw QuadratureError("non-finite interpolation error");
  }
  return report;
}

ErrorReport interpolation_errors(const ScalarField& u, const TriangulationFrame& frame, double p, double q,
                                 const Box& domain, bool with_gradient, const ErrorOptions& options) {
  return interpolation_errors(non_owning(u), frame, p, q, domain, with_gradient, options);
}

double grad_error(const FieldPtr& u, const TriangulationFrame& frame, double p, const Box& domain,
                  const ErrorOptions& options) {
  return interpolation_errors(u, frame, p, 1.0, domain, true, options).grad_error_p;
}

double value_error(const FieldPtr& u, const TriangulationFrame& frame, double q, const Box& domain,
                   const ErrorOptions& options) {
  return interpolation_errors(u, frame, 1.0, q, domain, false, options).value_error_q;
}

double translation_error(const ScalarField& u, const Point& h, double p, const TranslationOptions& options) {
  check_exponent(p, "translation");
  const int n = u.dim();
  if (h.size() != n) throw DimensionError("shift dimension does not match field");
  if (u.field_class() == FieldClass::bv_indicator) throw Error("translation error needs a pointwise gradient");
  if (options.cells_per_axis < 1 || options.points_per_cell < 1) throw Error("translation grid must be nonempty");

  const Box domain = u.support().hull(u.support().translated(-h));
  const auto gauss = gauss_legendre01(options.points_per_cell);
  // Composite Gauss-Legendre nodes per axis.
  std::vector<std::vector<double>> nodes(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> weights(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double width = (domain.upper()(j) - domain.lower()(j)) / options.cells_per_axis;
    for (int c = 0; c < options.cells_per_axis; ++c) {
      for (std::size_t k = 0; k < gauss.size(); ++k) {
        nodes[static_cast<std::size_t>(j)].push_back(domain.lower()(j) + width * (c + gauss.nodes[k]));
        weights[static_cast<std::size_t>(j)].push_back(width * gauss.weights[k]);
      }
    }
  }
  const std::size_t per_axis = nodes[0].size();
  std::vector<std::size_t> index(static_cast<std::size_t>(n), 0);
  CompensatedSum sum;
  Point x(n);
  Point shifted(n);
  while (true) {
    double w = 1.0;
    for (int j = 0; j < n; ++j) {
      x(j) = nodes[static_cast<std::size_t>(j)][index[static_cast<std::size_t>(j)]];
      w *= weights[static_cast<std::size_t>(j)][index[static_cast<std::size_t>(j)]];
    }
    shifted = x + h;
    const Covector d = *u.gradient(x) - *u.gradient(shifted);
    sum.add(w * std::pow(d.norm(), p));
    int j = n - 1;
    while (j >= 0 && index[static_cast<std::size_t>(j)] + 1 == per_axis) {
      index[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
    ++index[static_cast<std::size_t>(j)];
  }
  return sum.value();
}

namespace {

struct SlotOutcome {
  std::optional<ErrorReport> report;
  std::size_t rejected = 0;
};

SlotOutcome evaluate_slot(const FieldPtr& u, double r, double p, double q, std::uint64_t seed, std::uint64_t slot,
                          std::uint64_t substream, const AveragingOptions& options) {
  const int n = u->dim();
  const bool with_gradient = u->field_class() != FieldClass::bv_indicator;
  SeededStream rng(seed, slot, substream);
  SlotOutcome out;
  for (std::size_t attempt = 0; attempt < options.max_attempts_per_sample; ++attempt) {
    const Point h = rng.in_ball(n, r);
    const TriangulationFrame frame(BaseTriangulation(n), r, h);
    const Box domain = options.domain ? *options.domain : default_domain(*u, frame);
    try {
      out.report = interpolation_errors(u, frame, p, q, domain, with_gradient, options.errors);
      return out;
    } catch (const LebesgueGuardError&) {
      ++out.rejected;
    }
  }
  return out;
}

}  // namespace

AveragedReport averaged_error(const FieldPtr& u, double r, double p, double q, std::size_t samples,
                              std::uint64_t seed, const AveragingOptions& options) {
  if (!u) throw Error("averaged_error needs a field");
  if (samples < 1) throw Error("averaged_error needs at least one sample");
  if (!(r > 0.0)) throw Error("scale r must be positive");
  check_exponent(p, "gradient");
  check_exponent(q, "value");

  std::vector<SlotOutcome> outcomes(samples);
  parallel_for(
      samples, [&](std::size_t i) { outcomes[i] = evaluate_slot(u, r, p, q, seed, i, 0, options); },
      options.threads);

  AveragedReport report;
  report.r = r;
  report.samples = samples;
  report.seed = seed;
  report.min = std::numeric_limits<double>::infinity();
  report.max = -std::numeric_limits<double>::infinity();
  CompensatedSum total, grad, value;
  std::size_t accepted = 0;
  for (auto& o : outcomes) {
    report.rejected += o.rejected;
    if (!o.report) {
      ++report.failed_slots;
      continue;
    }
    ++accepted;
    const double t = o.report->total();
    total.add(t);
    grad.add(o.report->grad_error_p);
    value.add(o.report->value_error_q);
    if (t < report.min) {
      report.min = t;
      report.argmin_h = o.report->h;
    }
    report.max = std::max(report.max, t);
    report.per_sample.push_back(std::move(*o.report));
  }
  if (accepted == 0) {
    throw LebesgueGuardError("every sampled offset was rejected by the Lebesgue guard");
  }
  report.mean = total.value() / static_cast<double>(accepted);
  report.mean_grad = grad.value() / static_cast<double>(accepted);
  report.mean_value = value.value() / static_cast<double>(accepted);
  // Rounding in the mean must not break min <= mean <= max.
  report.mean = std::clamp(report.mean, report.min, report.max);
  return report;
}

SearchResult find_triangulation(const FieldPtr& u, double epsilon, double p, double q, std::uint64_t seed,
                                const SearchOptions& options) {
  if (!u) throw Error("find_triangulation needs a field");
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  if (!(options.initial_scale > 0.0) || options.max_levels < 1 || options.samples_per_level < 1) {
    throw Error("invalid search schedule");
  }
  const int n = u->dim();
  const std::size_t workers = std::max<std::size_t>(
      1, options.averaging.threads == 0 ? thread_count() : options.averaging.threads);

  std::optional<SearchResult> best;
  std::size_t evaluations = 0;
  double r = options.initial_scale;
  for (int level = 0; level < options.max_levels; ++level, r *= 0.5) {
    // Evaluate in chunks of `workers` and stop after the first chunk holding
    // a success; the lowest index wins, so the outcome is schedule-free.
    for (std::size_t start = 0; start < options.samples_per_level; start += workers) {
      const std::size_t count = std::min(workers, options.samples_per_level - start);
      std::vector<SlotOutcome> chunk(count);
      parallel_for(
          count,
          [&](std::size_t k) {
            chunk[k] = evaluate_slot(u, r, p, q, seed, start + k, static_cast<std::uint64_t>(level) + 1,
                                     options.averaging);
          },
          workers);
      for (std::size_t k = 0; k < count; ++k) {
        if (!chunk[k].report) continue;
        ++evaluations;
        const ErrorReport& rep = *chunk[k].report;
        const TriangulationFrame frame(BaseTriangulation(n), r, rep.h);
        if (!best || rep.total() < best->report.total()) {
          best = SearchResult{frame, rep, level, start + k, 0};
        }
        if (rep.total() <= epsilon) {
          SearchResult found{frame, rep, level, start + k, 0};
          found.evaluations = evaluations;
          return found;
        }
      }
    }
  }
  if (!best) throw LebesgueGuardError("every sampled offset was rejected by the Lebesgue guard");
  best->evaluations = evaluations;
  throw SearchExhaustedError("no frame met the error target within the level cap", *best);
}

}  // namespace pwinterp
