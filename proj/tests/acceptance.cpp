// End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit on
// any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "pwinterp/analysis.hpp"
#include "pwinterp/sampling.hpp"
#include "run_config.hpp"

using namespace pwinterp;
namespace fs = std::filesystem;

namespace {

// Pilot run (seed 7, 200 samples, r = 0.05 and 0.02) gave max TV / (2 + sqrt 2) = 1.195.
constexpr double kBvConstant = 1.25;
const std::vector<const char*> kSmoothCorpus{"constant", "affine", "quadratic", "gaussian"};

struct Outcome {
  bool passed;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

Outcome lemma1_identity() {
  // Closed form: u = x^2 on [0,1] at a = 0, both sides -1/3.
  const Simplex unit({Point::Constant(1, 0.0), Point::Constant(1, 1.0)});
  const auto closed = check_lemma1(*make_norm_squared(1), SimplexRegion{unit, 0});
  const double closed_gap = std::max(std::abs(closed.lhs + 1.0 / 3.0), std::abs(closed.rhs + 1.0 / 3.0));
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (std::size_t f = 0; f < kSmoothCorpus.size(); ++f) {
      const auto u = make_field(kSmoothCorpus[f], n);
      SeededStream rng(2024, static_cast<std::uint64_t>(10 * n + f));
      for (int i = 0; i < 50; ++i) {
        const Simplex s = random_simplex(rng, n, -1.5, 1.5);
        worst = std::max(worst, check_lemma1(*u, SimplexRegion{s, i % (n + 1)}).residual);
      }
      for (int i = 0; i < 20; ++i) {
        const Point c = rng.in_ball(n, 1.0);
        worst = std::max(worst, check_lemma1(*u, BallRegion{c, rng.uniform(0.2, 1.5)}).residual);
      }
    }
  }
  return {worst <= 1e-8 && closed_gap <= 1e-12,
          fmt("max residual %.3g (limit 1e-08); closed form gap %.3g (limit 1e-12)", worst, closed_gap)};
}

Outcome lemma2_identity() {
  double worst = 0.0, worst_1d = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (std::size_t f = 0; f < kSmoothCorpus.size(); ++f) {
      const auto u = make_field(kSmoothCorpus[f], n);
      SeededStream rng(2024, static_cast<std::uint64_t>(10 * n + f));
      for (int i = 0; i < 50; ++i) {
        const Simplex s = random_simplex(rng, n, -1.5, 1.5);
        const auto res = check_lemma2(*u, s);
        worst = std::max(worst, res.residual);
        if (n == 1) {
          const double a = std::min(s.vertex(0)(0), s.vertex(1)(0)), b = std::max(s.vertex(0)(0), s.vertex(1)(0));
          const double mean = mean_derivative_1d(*u, a, b);
          worst_1d = std::max({worst_1d, std::abs(res.direct(0) - mean), std::abs(res.kernel_average(0) - mean)});
        }
      }
    }
  }
  return {worst <= 1e-8 && worst_1d <= 1e-12,
          fmt("max residual %.3g (limit 1e-08); 1-d mean derivative gap %.3g (limit 1e-12)", worst, worst_1d)};
}

Outcome affine_exactness() {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const auto u = make_field("affine", n);
    SeededStream rng(31, static_cast<std::uint64_t>(n));
    for (int i = 0; i < 10; ++i) {
      const double r = rng.uniform(0.1, 1.0);
      const TriangulationFrame frame(BaseTriangulation(n), r, rng.in_ball(n, r));
      const Box domain = default_domain(*u, frame);
      for (double p : {1.0, 2.0}) {
        const auto rep = interpolation_errors(u, frame, p, p, domain);
        worst = std::max({worst, rep.grad_error_p, rep.value_error_q});
      }
      const Simplex s = simplex_of(frame, locate(frame, rng.in_ball(n, 1.0)));
      worst = std::max(worst, check_lemma2(*u, s).residual);
    }
  }
  return {worst <= 1e-10, fmt("max error functional %.3g (limit 1e-10)", worst)};
}

Outcome convergence() {
  const auto u = make_field("gaussian", 2);
  const std::vector<double> rs{0.4, 0.2, 0.1, 0.05};
  std::vector<AveragedReport> reps;
  for (double r : rs) reps.push_back(averaged_error(u, r, 2.0, 2.0, 32, 11));
  bool decreasing = true;
  std::ostringstream detail;
  detail << "means";
  for (std::size_t k = 0; k < reps.size(); ++k) {
    detail << ' ' << fmt("%.4g", reps[k].mean);
    if (k > 0) decreasing = decreasing && reps[k].mean < reps[k - 1].mean;
  }
  bool in_range = true;
  detail << "; grad ratios";
  for (std::size_t k = 1; k < reps.size(); ++k) {
    const double ratio = std::sqrt(reps[k - 1].mean_grad / reps[k].mean_grad);
    detail << ' ' << fmt("%.4f", ratio);
    if (k + 2 >= reps.size()) in_range = in_range && ratio >= 1.7 && ratio <= 2.6;
  }
  detail << " (finest two in [1.7, 2.6])";
  return {decreasing && in_range, detail.str()};
}

Outcome search() {
  const auto u = make_field("gaussian", 2);
  const double eps = 1e-2;
  const auto found = find_triangulation(u, eps, 2.0, 2.0, 5);
  const auto check = interpolation_errors(u, found.frame, 2.0, 2.0, default_domain(*u, found.frame));
  return {check.total() <= eps,
          fmt("r = %.4g after %.0f evaluations; re-verified error %.4g (limit 0.01)", found.frame.scale(),
              static_cast<double>(found.evaluations), check.total())};
}

Outcome bv_exact() {
  const double tv = *make_reference_indicator()->exact_total_variation();
  const double gap = std::abs(tv - (2.0 + std::sqrt(2.0)));
  return {gap <= 1e-12, fmt("TV %.15f, gap %.3g (limit 1e-12)", tv, gap)};
}

BvStatistics& bv_run(double r) {
  static std::vector<std::pair<double, BvStatistics>> cache;
  for (auto& [key, st] : cache) {
    if (key == r) return st;
  }
  cache.emplace_back(r, bv_counterexample(r, 200, 7));
  return cache.back().second;
}

Outcome bv_counterexample_stats() {
  const auto& st = bv_run(0.02);
  return {st.min_tv >= 3.8 && st.mean_tv >= 3.9,
          fmt("r = 0.02: min TV %.4f (limit 3.8), mean TV %.4f (limit 3.9), %.0f rejected offsets", st.min_tv,
              st.mean_tv, static_cast<double>(st.rejected))};
}

Outcome bv_bounded() {
  double worst = 0.0;
  for (double r : {0.05, 0.02}) {
    const auto& st = bv_run(r);
    for (double tv : st.sample_tv) worst = std::max(worst, tv / st.exact_tv);
  }
  return {worst <= kBvConstant, fmt("max TV / (2 + sqrt 2) = %.4f, C = %.2f", worst, kBvConstant)};
}

std::string run_and_read(const cli::RunConfig& config, const char* threads) {
  ::setenv("PWINTERP_THREADS", threads, 1);
  cli::execute(config);
  std::ifstream in(fs::path(config.out) / "report.json");
  std::stringstream s;
  s << in.rdbuf();
  return cli::stable_report_text(nlohmann::json::parse(s.str()));
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "pwinterp_acceptance";
  fs::remove_all(root);
  cli::RunConfig bv;
  bv.command = "bv";
  bv.field = "indicator_triangle";
  bv.samples = 200;
  bv.seed = 7;
  bv.out = (root / "bv").string();
  cli::RunConfig conv;
  conv.command = "converge";
  conv.field = "gaussian";
  conv.samples = 16;
  conv.seed = 11;
  conv.r = {0.2, 0.1};
  conv.out = (root / "converge").string();
  const char* saved = std::getenv("PWINTERP_THREADS");
  const std::string restore = saved ? saved : "";
  bool same = true;
  for (const auto& config : {bv, conv}) {
    const std::string one = run_and_read(config, "1");
    same = same && one == run_and_read(config, "4") && one == run_and_read(config, "7");
  }
  if (saved) {
    ::setenv("PWINTERP_THREADS", restore.c_str(), 1);
  } else {
    ::unsetenv("PWINTERP_THREADS");
  }
  return {same, same ? "bv and converge reports identical for 1, 4 and 7 threads"
                     : "reports differ between thread counts"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "vertex representation identity", 60, lemma1_identity},
      {2, "interpolant kernel identity", 60, lemma2_identity},
      {3, "affine exactness", 10, affine_exactness},
      {4, "convergence of averaged error", 300, convergence},
      {5, "triangulation search", 300, search},
      {6, "exact total variation of the triangle", 1, bv_exact},
      {7, "interpolant total variation overshoot", 180, bv_counterexample_stats},
      {8, "interpolant total variation bounded", 180, bv_bounded},
      {9, "reports independent of thread count", 300, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool passed = out.passed && in_time;
    failures += passed ? 0 : 1;
    std::printf("%s criterion %d (%s): %s [%.2f s, budget %.0f s]\n", passed ? "PASS" : "FAIL", c.id, c.title,
                out.detail.c_str(), seconds, c.budget_seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
