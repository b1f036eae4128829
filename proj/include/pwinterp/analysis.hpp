#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pwinterp/fields.hpp"
#include "pwinterp/geometry.hpp"
#include "pwinterp/mesh.hpp"
#include "pwinterp/quadrature.hpp"

namespace pwinterp {

// ---------------------------------------------------------------------------
// Integral representation identities

struct SimplexRegion {
  Simplex simplex;
  int vertex = 0;
};

struct BallRegion {
  Point center;
  double radius = 1.0;
};

using LemmaRegion = std::variant<SimplexRegion, BallRegion>;

struct LemmaOptions {
  int radial_points = 16;
  int facet_degree = 20;
  int volume_degree = 24;
  int ball_radial_points = 16;
  int ball_angular_resolution = 24;
};

struct LemmaResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  std::string context;
};

/// Sobolev representation at a base point of a convex region:
///   lhs = u(a) - ⨍_C u,  rhs = (1/n) ⨍_C Du(x)[a - x] (gauge(x)^-n - 1) dx.
/// The simplex version integrates in cone coordinates about the vertex, the
/// ball version in polar coordinates about the centre; both cancel the
/// singularity analytically.
LemmaResidual check_lemma1(const ScalarField& u, const LemmaRegion& region, const LemmaOptions& options = {});

/// One vertex term of the interpolant kernel,
///   (1/n) ((1 - β_i(x))^-n - 1) l[a_i - x] Dβ_i.
Covector kernel_term(const Simplex& s, int i, const Point& x, const Covector& l);

/// K_Σ(x)[l] = sum of kernel_term over the vertices. Rejects x at a vertex.
Covector kernel_K(const Simplex& s, const Point& x, const Covector& l);

/// ⨍_Σ K_Σ[Du], each vertex term integrated in cone coordinates about its
/// own singular vertex.
Covector kernel_average(const ScalarField& u, const Simplex& s, const LemmaOptions& options = {});

struct Lemma2Residual : LemmaResidual {
  Covector direct;          // D(Π_Σ u) = sum u(a_i) Dβ_i
  Covector kernel_average;  // ⨍ K_Σ[Du]
};

/// Compares the interpolant gradient with the kernel average. lhs and rhs are
/// the Euclidean norms of the two covectors; residual is the norm of their
/// difference.
Lemma2Residual check_lemma2(const ScalarField& u, const Simplex& s, const LemmaOptions& options = {});

/// ⨍_[a,b] u' by Gauss-Legendre; the one-dimensional kernel average.
double mean_derivative_1d(const ScalarField& u, double a, double b, int points = 24);

// ---------------------------------------------------------------------------
// Interpolation error functionals

struct ErrorOptions {
  /// Polynomial degree of the per-cell quadrature rule.
  int cell_degree = 7;
};

struct ErrorReport {
  double r = 0.0;
  Point h;
  double p = 2.0;
  double q = 2.0;
  double grad_error_p = 0.0;   // ∫ |Du - Dv|^p
  double value_error_q = 0.0;  // ∫ |u - v|^q
  std::optional<Box> domain;
  std::size_t cells_visited = 0;
  double tail_bound = 0.0;  // mass of u and Du dropped outside the support box

  double total() const { return grad_error_p + value_error_q; }
};

/// Support box of u grown by one cell diameter of the frame.
Box default_domain(const ScalarField& u, const TriangulationFrame& frame);

/// Sums ∫_cell |Du - Dv|^p and ∫_cell |u - v|^q over every cell whose
/// interior meets the domain. The gradient term is skipped (left at 0) when
/// with_gradient is false, and rejected for BV fields.
ErrorReport interpolation_errors(const ScalarField& u, const TriangulationFrame& frame, double p, double q,
                                 const Box& domain, bool with_gradient = true, const ErrorOptions& options = {});
ErrorReport interpolation_errors(const FieldPtr& u, const TriangulationFrame& frame, double p, double q,
                                 const Box& domain, bool with_gradient = true, const ErrorOptions& options = {});

double grad_error(const FieldPtr& u, const TriangulationFrame& frame, double p, const Box& domain,
                  const ErrorOptions& options = {});
double value_error(const FieldPtr& u, const TriangulationFrame& frame, double q, const Box& domain,
                   const ErrorOptions& options = {});

struct TranslationOptions {
  int cells_per_axis = 48;
  int points_per_cell = 6;
};

/// ∫ |Du(x) - Du(x + h)|^p dx over the support of u and of its translate.
double translation_error(const ScalarField& u, const Point& h, double p, const TranslationOptions& options = {});

struct AveragedReport {
  double r = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;  // of grad_error_p + value_error_q
  double min = 0.0;
  double max = 0.0;
  Point argmin_h;
  double mean_grad = 0.0;
  double mean_value = 0.0;
  std::size_t rejected = 0;  // offsets resampled by the Lebesgue guard
  std::size_t failed_slots = 0;
  std::vector<ErrorReport> per_sample;
};

struct AveragingOptions {
  ErrorOptions errors;
  std::size_t max_attempts_per_sample = 64;
  std::size_t threads = 0;  // 0: thread_count()
  std::optional<Box> domain;  // default: default_domain() of each frame
};

/// Monte Carlo average over offsets h uniform in B_r of the interpolation
/// errors on S^r_h. Sample i draws from its own stream (seed, i), so the
/// report does not depend on the evaluation order or thread count.
AveragedReport averaged_error(const FieldPtr& u, double r, double p, double q, std::size_t samples,
                              std::uint64_t seed, const AveragingOptions& options = {});

struct SearchOptions {
  double initial_scale = 1.0;
  int max_levels = 20;
  std::size_t samples_per_level = 32;
  AveragingOptions averaging;
};

struct SearchResult {
  TriangulationFrame frame;
  ErrorReport report;
  int level = 0;
  std::size_t sample_index = 0;
  std::size_t evaluations = 0;
};

class SearchExhaustedError : public Error {
 public:
  SearchExhaustedError(const std::string& what, SearchResult best) : Error(what), best_(std::move(best)) {}
  const SearchResult& best() const { return best_; }

 private:
  SearchResult best_;
};

/// Halves r from the initial scale; at each level draws offsets in B_r and
/// accepts the first (lowest index) whose total error is at most epsilon.
SearchResult find_triangulation(const FieldPtr& u, double epsilon, double p, double q, std::uint64_t seed,
                                const SearchOptions& options = {});

// ---------------------------------------------------------------------------
// Bounded variation

/// sum over cells meeting the domain of |D v| vol(cell).
double total_variation(const InterpolantField& v, const Box& domain);

struct BvStatistics {
  double r = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double exact_tv = 0.0;
  double min_tv = 0.0;
  double mean_tv = 0.0;
  double max_tv = 0.0;
  Point argmin_h;
  std::size_t rejected = 0;
  std::vector<Point> sample_h;
  std::vector<double> sample_tv;
};

/// Interpolant total variation of the indicator of the triangle
/// (0,0), (0,1), (1,0) on S^r_h for offsets h sampled in B_r.
BvStatistics bv_counterexample(double r, std::size_t samples, std::uint64_t seed, std::size_t threads = 0);

}  // namespace pwinterp
