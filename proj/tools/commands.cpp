#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>

#include "artifacts.hpp"
#include "pwinterp/analysis.hpp"
#include "pwinterp/sampling.hpp"

#ifndef PWINTERP_VERSION
#define PWINTERP_VERSION "0.0.0"
#endif

namespace pwinterp::cli {

using nlohmann::json;
namespace fs = std::filesystem;

bool RunOutcome::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

struct Artifacts {
  std::map<std::string, CsvTable> tables;
  std::map<std::string, std::string> plots;
};

struct CommandOutput {
  json results = json::object();
  std::vector<Check> checks;
  Artifacts artifacts;
};

Check at_most(std::string name, double value, double limit) {
  return {std::move(name), value, limit, "<=", value <= limit};
}

Check at_least(std::string name, double value, double limit) {
  return {std::move(name), value, limit, ">=", value >= limit};
}

json to_json(const Point& x) {
  json a = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) a.push_back(x(i));
  return a;
}

json to_json(const Covector& x) { return to_json(Point(x.transpose())); }

std::vector<std::string> indexed(const std::string& stem, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(stem + "_" + std::to_string(i));
  return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Box domain_or(const RunConfig& c, const Box& fallback) {
  if (!c.domain) return fallback;
  Point lo(c.n), hi(c.n);
  for (int i = 0; i < c.n; ++i) {
    lo(i) = c.domain->lower[static_cast<std::size_t>(i)];
    hi(i) = c.domain->upper[static_cast<std::size_t>(i)];
  }
  return Box(lo, hi);
}

std::vector<double> schedule(const RunConfig& c) { return c.r.empty() ? default_schedule(c.command) : c.r; }

// ---------------------------------------------------------------------------

CommandOutput run_lemma1(const RunConfig& c) {
  CommandOutput out;
  const auto u = make_field(c.field, c.n);
  CsvTable table({"region", "index", "vertex", "radius", "lhs", "rhs", "residual"});
  double worst = 0.0;
  SeededStream simplex_rng(c.seed, 0);
  for (std::size_t i = 0; i < c.simplices; ++i) {
    const Simplex s = random_simplex(simplex_rng, c.n, -1.5, 1.5);
    const int vertex = static_cast<int>(i % static_cast<std::size_t>(c.n + 1));
    const auto res = check_lemma1(*u, SimplexRegion{s, vertex});
    worst = std::max(worst, res.residual);
    table.add_row({0.0, static_cast<double>(i), static_cast<double>(vertex), 0.0, res.lhs, res.rhs, res.residual});
  }
  SeededStream ball_rng(c.seed, 1);
  for (std::size_t i = 0; i < c.balls; ++i) {
    const Point center = ball_rng.in_ball(c.n, 1.0);
    const double radius = ball_rng.uniform(0.2, 1.5);
    const auto res = check_lemma1(*u, BallRegion{center, radius});
    worst = std::max(worst, res.residual);
    table.add_row({1.0, static_cast<double>(i), -1.0, radius, res.lhs, res.rhs, res.residual});
  }
  out.results = {{"field", c.field}, {"n", c.n}, {"simplices", c.simplices}, {"balls", c.balls},
                 {"max_residual", worst}};
  out.checks.push_back(at_most("lemma1_max_residual", worst, c.tolerances.lemma_residual));
  out.artifacts.tables.emplace("residuals.csv", std::move(table));
  return out;
}

CommandOutput run_lemma2(const RunConfig& c) {
  CommandOutput out;
  const auto u = make_field(c.field, c.n);
  CsvTable table(concat(concat({"index", "direct_norm", "kernel_norm", "residual"}, indexed("direct", c.n)),
                        indexed("kernel", c.n)));
  double worst = 0.0, worst_1d = 0.0;
  SeededStream rng(c.seed, 0);
  for (std::size_t i = 0; i < c.simplices; ++i) {
    const Simplex s = random_simplex(rng, c.n, -1.5, 1.5);
    const auto res = check_lemma2(*u, s);
    worst = std::max(worst, res.residual);
    std::vector<double> row{static_cast<double>(i), res.lhs, res.rhs, res.residual};
    for (int k = 0; k < c.n; ++k) row.push_back(res.direct(k));
    for (int k = 0; k < c.n; ++k) row.push_back(res.kernel_average(k));
    table.add_row(std::move(row));
    if (c.n == 1) {
      const double a = std::min(s.vertex(0)(0), s.vertex(1)(0)), b = std::max(s.vertex(0)(0), s.vertex(1)(0));
      worst_1d = std::max(worst_1d, std::abs(res.kernel_average(0) - mean_derivative_1d(*u, a, b)));
    }
  }
  out.results = {{"field", c.field}, {"n", c.n}, {"simplices", c.simplices}, {"max_residual", worst}};
  out.checks.push_back(at_most("lemma2_max_residual", worst, c.tolerances.lemma_residual));
  if (c.field == "affine") out.checks.push_back(at_most("affine_reproduction", worst, c.tolerances.affine));
  if (c.n == 1) {
    out.results["max_mean_derivative_gap"] = worst_1d;
    out.checks.push_back(at_most("kernel_mean_derivative_1d", worst_1d, c.tolerances.kernel_1d));
  }
  out.artifacts.tables.emplace("residuals.csv", std::move(table));
  return out;
}

json to_json(const ErrorReport& e) {
  return {{"r", e.r},
          {"h", to_json(e.h)},
          {"p", e.p},
          {"q", e.q},
          {"grad_error_p", e.grad_error_p},
          {"value_error_q", e.value_error_q},
          {"total", e.total()},
          {"cells_visited", e.cells_visited},
          {"tail_bound", e.tail_bound}};
}

CommandOutput run_converge(const RunConfig& c) {
  CommandOutput out;
  const auto u = make_field(c.field, c.n);
  const bool with_gradient = u->field_class() != FieldClass::bv_indicator;
  auto rs = schedule(c);
  std::sort(rs.begin(), rs.end(), std::greater<>());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());

  AveragingOptions options;
  if (c.domain) options.domain = domain_or(c, Box::cube(c.n, 0.0, 1.0));

  CsvTable sweep({"r", "samples", "mean_total", "min_total", "max_total", "mean_grad", "mean_value", "rejected",
                  "failed_slots", "tail_bound"});
  CsvTable samples(concat(concat({"r", "sample"}, indexed("h", c.n)), {"grad_error", "value_error", "cells"}));
  CsvTable rates({"r_coarse", "r_fine", "grad_ratio", "total_ratio", "grad_order"});
  std::vector<AveragedReport> reports;
  json levels = json::array();
  for (double r : rs) {
    auto rep = averaged_error(u, r, c.p, c.q, c.samples, c.seed, options);
    const double tail = rep.per_sample.empty() ? 0.0 : rep.per_sample.front().tail_bound;
    sweep.add_row({r, static_cast<double>(rep.samples), rep.mean, rep.min, rep.max, rep.mean_grad, rep.mean_value,
                   static_cast<double>(rep.rejected), static_cast<double>(rep.failed_slots), tail});
    for (std::size_t i = 0; i < rep.per_sample.size(); ++i) {
      const auto& e = rep.per_sample[i];
      std::vector<double> row{r, static_cast<double>(i)};
      for (int k = 0; k < c.n; ++k) row.push_back(e.h(k));
      row.push_back(e.grad_error_p);
      row.push_back(e.value_error_q);
      row.push_back(static_cast<double>(e.cells_visited));
      samples.add_row(std::move(row));
    }
    levels.push_back({{"r", r},
                      {"samples", rep.samples},
                      {"mean", rep.mean},
                      {"min", rep.min},
                      {"max", rep.max},
                      {"argmin_h", to_json(rep.argmin_h)},
                      {"mean_grad", rep.mean_grad},
                      {"mean_value", rep.mean_value},
                      {"rejected", rep.rejected},
                      {"failed_slots", rep.failed_slots},
                      {"tail_bound", tail}});
    reports.push_back(std::move(rep));
  }

  bool decreasing = true;
  for (std::size_t k = 1; k < reports.size(); ++k) decreasing = decreasing && reports[k].mean < reports[k - 1].mean;
  out.checks.push_back({"mean_error_strictly_decreasing", decreasing ? 1.0 : 0.0, 1.0, "==", decreasing});

  json ratio_list = json::array();
  for (std::size_t k = 1; k < reports.size(); ++k) {
    const double halvings = std::log2(rs[k - 1] / rs[k]);
    // L^p norm ratio of the gradient error, normalised to one halving of r.
    const double grad_ratio =
        with_gradient ? std::pow(reports[k - 1].mean_grad / reports[k].mean_grad, 1.0 / (c.p * halvings)) : 0.0;
    const double total_ratio = std::pow(reports[k - 1].mean / reports[k].mean, 1.0 / halvings);
    const double order = with_gradient ? std::log2(grad_ratio) : 0.0;
    rates.add_row({rs[k - 1], rs[k], grad_ratio, total_ratio, order});
    ratio_list.push_back({{"r_coarse", rs[k - 1]}, {"r_fine", rs[k]}, {"grad_ratio", grad_ratio},
                          {"total_ratio", total_ratio}});
    if (with_gradient && k + 2 >= reports.size()) {
      const std::string label = "grad_ratio_r" + format_number(rs[k]);
      out.checks.push_back(at_least(label + "_min", grad_ratio, c.tolerances.rate_min));
      out.checks.push_back(at_most(label + "_max", grad_ratio, c.tolerances.rate_max));
    }
  }
  out.results = {{"field", c.field}, {"n", c.n}, {"p", c.p}, {"q", c.q}, {"seed", c.seed},
                 {"levels", levels}, {"ratios", ratio_list}};

  if (c.search_epsilon) {
    const double eps = *c.search_epsilon;
    SearchOptions search;
    search.averaging = options;
    json s = {{"epsilon", eps}};
    try {
      const auto found = find_triangulation(u, eps, c.p, c.q, c.seed, search);
      const auto& frame = found.frame;
      const Box domain = c.domain ? domain_or(c, Box::cube(c.n, 0.0, 1.0)) : default_domain(*u, frame);
      const auto check = interpolation_errors(u, frame, c.p, c.q, domain, with_gradient);
      s["found"] = true;
      s["level"] = found.level;
      s["sample_index"] = found.sample_index;
      s["evaluations"] = found.evaluations;
      s["report"] = to_json(found.report);
      s["reverified_total"] = check.total();
      out.checks.push_back(at_most("search_reverified_total", check.total(), eps));
    } catch (const SearchExhaustedError& e) {
      s["found"] = false;
      s["best"] = to_json(e.best().report);
      s["evaluations"] = e.best().evaluations;
      out.checks.push_back(at_most("search_reverified_total", e.best().report.total(), eps));
    }
    out.results["search"] = s;
  }

  std::vector<double> grad, value, total;
  for (const auto& rep : reports) {
    total.push_back(rep.mean);
    grad.push_back(rep.mean_grad);
    value.push_back(rep.mean_value);
  }
  std::vector<Series> series{{"mean total", "#1f77b4", rs, total}};
  if (with_gradient) series.push_back({"mean grad^p", "#d62728", rs, grad});
  series.push_back({"mean value^q", "#2ca02c", rs, value});
  out.artifacts.plots.emplace("convergence.svg", loglog_svg("Averaged interpolation error: " + c.field + ", n = " +
                                                                std::to_string(c.n),
                                                            "r", "error", series));
  out.artifacts.tables.emplace("sweep.csv", std::move(sweep));
  out.artifacts.tables.emplace("samples.csv", std::move(samples));
  out.artifacts.tables.emplace("rates.csv", std::move(rates));
  return out;
}

CommandOutput run_bv(const RunConfig& c) {
  CommandOutput out;
  const double exact = *make_reference_indicator()->exact_total_variation();
  const double constant = c.tolerances.bv_constant;
  CsvTable summary({"r", "samples", "exact_tv", "min_tv", "mean_tv", "max_tv", "rejected"});
  CsvTable per_sample({"r", "sample", "h_0", "h_1", "tv"});
  json levels = json::array();
  double worst_ratio = 0.0;
  for (double r : schedule(c)) {
    const auto st = bv_counterexample(r, c.samples, c.seed);
    summary.add_row({r, static_cast<double>(st.samples), st.exact_tv, st.min_tv, st.mean_tv, st.max_tv,
                     static_cast<double>(st.rejected)});
    for (std::size_t i = 0; i < st.sample_tv.size(); ++i) {
      per_sample.add_row({r, static_cast<double>(i), st.sample_h[i](0), st.sample_h[i](1), st.sample_tv[i]});
    }
    levels.push_back({{"r", r},
                      {"samples", st.samples},
                      {"min_tv", st.min_tv},
                      {"mean_tv", st.mean_tv},
                      {"max_tv", st.max_tv},
                      {"argmin_h", to_json(st.argmin_h)},
                      {"rejected", st.rejected}});
    worst_ratio = std::max(worst_ratio, st.max_tv / exact);
    if (r <= c.tolerances.bv_threshold_max_r * (1.0 + 1e-12)) {
      const std::string label = "r" + format_number(r);
      out.checks.push_back(at_least("min_tv_" + label, st.min_tv, c.tolerances.bv_min_tv));
      out.checks.push_back(at_least("mean_tv_" + label, st.mean_tv, c.tolerances.bv_mean_tv));
    }
  }
  const double expected = 2.0 + std::sqrt(2.0);
  out.checks.insert(out.checks.begin(), at_most("exact_tv_error", std::abs(exact - expected), c.tolerances.bv_exact));
  out.checks.push_back(at_most("max_tv_over_exact", worst_ratio, constant));
  out.results = {{"field", "indicator_triangle"},
                 {"seed", c.seed},
                 {"exact_tv", exact},
                 {"bounding_constant", constant},
                 {"max_tv_over_exact", worst_ratio},
                 {"levels", levels}};
  out.artifacts.tables.emplace("bv.csv", std::move(summary));
  out.artifacts.tables.emplace("bv_samples.csv", std::move(per_sample));
  return out;
}

CommandOutput run_locate_demo(const RunConfig& c) {
  CommandOutput out;
  const double r = schedule(c).front();
  SeededStream offset_rng(c.seed, 1);
  const TriangulationFrame frame(BaseTriangulation(c.n), r, offset_rng.in_ball(c.n, r));
  const Box domain = domain_or(c, Box::cube(c.n, -1.0, 1.0));
  CsvTable table(concat(concat(concat(concat({"sample"}, indexed("x", c.n)), indexed("base", c.n)),
                               indexed("perm", c.n)),
                        concat(indexed("beta", c.n + 1), {"min_beta"})));
  SeededStream rng(c.seed, 0);
  double worst_outside = 0.0, worst_sum = 0.0, worst_diameter = 0.0;
  std::vector<double> px, py;
  for (std::size_t i = 0; i < c.samples; ++i) {
    const Point x = rng.in_box(domain.lower(), domain.upper());
    const auto key = locate(frame, x);
    const auto s = simplex_of(frame, key);
    const auto beta = s.barycentric(x);
    worst_outside = std::max(worst_outside, -beta.minCoeff());
    worst_sum = std::max(worst_sum, std::abs(beta.sum() - 1.0));
    worst_diameter = std::max(worst_diameter, std::abs(s.diameter() - frame.cell_diameter()));
    std::vector<double> row{static_cast<double>(i)};
    for (int k = 0; k < c.n; ++k) row.push_back(x(k));
    for (int k = 0; k < c.n; ++k) row.push_back(static_cast<double>(key.base(k)));
    for (int k = 0; k < c.n; ++k) row.push_back(key.perm[static_cast<std::size_t>(k)]);
    for (int k = 0; k <= c.n; ++k) row.push_back(beta(k));
    row.push_back(beta.minCoeff());
    table.add_row(std::move(row));
    if (c.n == 2) {
      px.push_back(x(0));
      py.push_back(x(1));
    }
  }
  const auto cells = cells_in_box(frame, domain);
  const auto vertices = lattice_vertices_in_box(frame, domain);
  out.results = {{"n", c.n},
                 {"r", r},
                 {"offset", to_json(frame.offset())},
                 {"cell_diameter", frame.cell_diameter()},
                 {"cell_volume", frame.cell_volume()},
                 {"cells_in_domain", cells.size()},
                 {"vertices_in_domain", vertices.size()},
                 {"max_outside", worst_outside},
                 {"max_partition_error", worst_sum},
                 {"max_diameter_error", worst_diameter}};
  out.checks.push_back(at_most("located_points_outside_cell", worst_outside, c.tolerances.locate));
  out.checks.push_back(at_most("barycentric_partition_error", worst_sum, c.tolerances.locate));
  out.checks.push_back(at_most("cell_diameter_error", worst_diameter, c.tolerances.locate * std::max(1.0, r)));
  out.artifacts.tables.emplace("locate.csv", std::move(table));
  if (c.n == 2 && cells.size() <= 20000) {
    std::vector<Triangle2> tris;
    for (const auto& key : cells) {
      const auto s = simplex_of(frame, key);
      Triangle2 t{};
      for (int k = 0; k < 3; ++k) {
        t.x[k] = s.vertex(k)(0);
        t.y[k] = s.vertex(k)(1);
      }
      tris.push_back(t);
    }
    out.artifacts.plots.emplace("locate.svg", mesh_svg("Kuhn cells meeting the domain, r = " + format_number(r),
                                                       tris, px, py));
  }
  return out;
}

}  // namespace

std::string stable_report_text(const json& report) {
  json copy = report;
  copy.erase("wall_time_seconds");
  return copy.dump(2);
}

RunOutcome execute(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  CommandOutput out;
  if (config.command == "lemma1") {
    out = run_lemma1(config);
  } else if (config.command == "lemma2") {
    out = run_lemma2(config);
  } else if (config.command == "converge") {
    out = run_converge(config);
  } else if (config.command == "bv") {
    out = run_bv(config);
  } else if (config.command == "locate-demo") {
    out = run_locate_demo(config);
  } else {
    throw ConfigError("unknown command '" + config.command + "'");
  }

  RunOutcome outcome;
  outcome.checks = out.checks;
  json checks = json::array();
  for (const auto& ch : out.checks) {
    checks.push_back(
        {{"name", ch.name}, {"value", ch.value}, {"limit", ch.limit}, {"relation", ch.relation}, {"passed", ch.passed}});
  }
  const fs::path root(config.out);
  json artifacts = json::array();
  for (const auto& [name, table] : out.artifacts.tables) {
    table.write(root / "tables" / name);
    artifacts.push_back("tables/" + name);
  }
  for (const auto& [name, svg] : out.artifacts.plots) {
    write_text(root / "plots" / name, svg);
    artifacts.push_back("plots/" + name);
  }
  outcome.report = {{"artifact", "pwinterp"},
                    {"version", PWINTERP_VERSION},
                    {"command", config.command},
                    {"config", to_json(config)},
                    {"results", out.results},
                    {"checks", checks},
                    {"artifacts", artifacts},
                    {"status", outcome.passed() ? "pass" : "tolerance_failure"}};
  outcome.report["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text(root / "report.json", outcome.report.dump(2) + "\n");
  return outcome;
}

}  // namespace pwinterp::cli
