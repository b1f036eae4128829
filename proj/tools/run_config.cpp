#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "pwinterp/fields.hpp"

namespace pwinterp::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string("'") + key + "' must be finite");
  return x;
}

std::uint64_t get_unsigned(const json& obj, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> get_numbers(const json& v, const std::string& what) {
  if (!v.is_array()) throw ConfigError("'" + what + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError("'" + what + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Tolerances parse_tolerances(const json& obj) {
  check_keys(obj,
             {"lemma_residual", "kernel_1d", "affine", "rate_min", "rate_max", "bv_exact", "bv_min_tv", "bv_mean_tv",
              "bv_threshold_max_r", "bv_constant", "locate"},
             "tolerances");
  Tolerances t;
  t.lemma_residual = get_number(obj, "lemma_residual", t.lemma_residual);
  t.kernel_1d = get_number(obj, "kernel_1d", t.kernel_1d);
  t.affine = get_number(obj, "affine", t.affine);
  t.rate_min = get_number(obj, "rate_min", t.rate_min);
  t.rate_max = get_number(obj, "rate_max", t.rate_max);
  t.bv_exact = get_number(obj, "bv_exact", t.bv_exact);
  t.bv_min_tv = get_number(obj, "bv_min_tv", t.bv_min_tv);
  t.bv_mean_tv = get_number(obj, "bv_mean_tv", t.bv_mean_tv);
  t.bv_threshold_max_r = get_number(obj, "bv_threshold_max_r", t.bv_threshold_max_r);
  t.bv_constant = get_number(obj, "bv_constant", t.bv_constant);
  t.locate = get_number(obj, "locate", t.locate);
  return t;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"lemma1", "lemma2", "converge", "bv", "locate-demo"};
  return names;
}

std::vector<double> default_schedule(const std::string& command) {
  if (command == "converge") return {0.4, 0.2, 0.1, 0.05};
  if (command == "bv") return {0.05, 0.02};
  if (command == "locate-demo") return {0.25};
  return {};
}

RunConfig parse_config(const json& doc) {
  check_keys(doc,
             {"command", "n", "field", "p", "q", "r", "samples", "seed", "domain", "out", "simplices", "balls",
              "search_epsilon", "tolerances"},
             "config");
  RunConfig c;
  c.command = get_string(doc, "command", c.command);
  {
    const auto n = get_unsigned(doc, "n", static_cast<std::uint64_t>(c.n));
    if (n > 16) throw ConfigError("'n' out of range");
    c.n = static_cast<int>(n);
  }
  c.field = get_string(doc, "field", c.field);
  c.p = get_number(doc, "p", c.p);
  c.q = get_number(doc, "q", c.q);
  if (doc.contains("r")) c.r = get_numbers(doc.at("r"), "r");
  c.samples = get_unsigned(doc, "samples", c.samples);
  c.seed = get_unsigned(doc, "seed", c.seed);
  if (doc.contains("domain") && !doc.at("domain").is_null()) {
    const auto& d = doc.at("domain");
    check_keys(d, {"lower", "upper"}, "domain");
    if (!d.contains("lower") || !d.contains("upper")) throw ConfigError("domain needs 'lower' and 'upper'");
    c.domain = DomainBox{get_numbers(d.at("lower"), "domain.lower"), get_numbers(d.at("upper"), "domain.upper")};
  }
  c.out = get_string(doc, "out", c.out);
  c.simplices = get_unsigned(doc, "simplices", c.simplices);
  c.balls = get_unsigned(doc, "balls", c.balls);
  if (doc.contains("search_epsilon") && !doc.at("search_epsilon").is_null()) {
    c.search_epsilon = get_number(doc, "search_epsilon", 0.0);
  }
  if (doc.contains("tolerances")) c.tolerances = parse_tolerances(doc.at("tolerances"));
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json doc;
  doc["command"] = c.command;
  doc["n"] = c.n;
  doc["field"] = c.field;
  doc["p"] = c.p;
  doc["q"] = c.q;
  doc["r"] = c.r;
  doc["samples"] = c.samples;
  doc["seed"] = c.seed;
  if (c.domain) {
    doc["domain"] = {{"lower", c.domain->lower}, {"upper", c.domain->upper}};
  } else {
    doc["domain"] = nullptr;
  }
  doc["out"] = c.out;
  doc["simplices"] = c.simplices;
  doc["balls"] = c.balls;
  doc["search_epsilon"] = c.search_epsilon ? json(*c.search_epsilon) : json(nullptr);
  const auto& t = c.tolerances;
  doc["tolerances"] = {{"lemma_residual", t.lemma_residual},
                       {"kernel_1d", t.kernel_1d},
                       {"affine", t.affine},
                       {"rate_min", t.rate_min},
                       {"rate_max", t.rate_max},
                       {"bv_exact", t.bv_exact},
                       {"bv_min_tv", t.bv_min_tv},
                       {"bv_mean_tv", t.bv_mean_tv},
                       {"bv_threshold_max_r", t.bv_threshold_max_r},
                       {"bv_constant", t.bv_constant},
                       {"locate", t.locate}};
  return doc;
}

void validate(const RunConfig& c) {
  const auto& cmds = command_names();
  if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end()) {
    throw ConfigError("unknown command '" + c.command + "'");
  }
  if (c.n < 1 || c.n > 3) throw ConfigError("'n' must be 1, 2 or 3");
  const auto names = field_names();
  if (std::find(names.begin(), names.end(), c.field) == names.end()) {
    throw ConfigError("unknown field '" + c.field + "'");
  }
  if (c.field == "indicator_triangle" && c.n != 2) throw ConfigError("indicator_triangle exists only for n = 2");
  if (c.command == "bv" && (c.field != "indicator_triangle" || c.n != 2)) {
    throw ConfigError("bv runs on field indicator_triangle with n = 2");
  }
  if ((c.command == "lemma1" || c.command == "lemma2") && c.field == "indicator_triangle") {
    throw ConfigError("lemma checks need a field with a pointwise gradient");
  }
  if (!(c.p >= 1.0) || !(c.q >= 1.0)) throw ConfigError("'p' and 'q' must be >= 1");
  if (c.samples < 1) throw ConfigError("'samples' must be >= 1");
  for (double r : c.r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("every r must be positive and finite");
  }
  if (c.domain) {
    if (c.domain->lower.size() != static_cast<std::size_t>(c.n) ||
        c.domain->upper.size() != static_cast<std::size_t>(c.n)) {
      throw ConfigError("domain bounds must have n entries");
    }
    for (int i = 0; i < c.n; ++i) {
      if (!(c.domain->lower[static_cast<std::size_t>(i)] < c.domain->upper[static_cast<std::size_t>(i)])) {
        throw ConfigError("domain lower bound must be below the upper bound");
      }
    }
  }
  if (c.search_epsilon && !(*c.search_epsilon > 0.0)) throw ConfigError("'search_epsilon' must be positive");
  if (c.out.empty()) throw ConfigError("'out' must not be empty");
  const auto& t = c.tolerances;
  for (double v : {t.lemma_residual, t.kernel_1d, t.affine, t.bv_exact, t.bv_constant, t.locate}) {
    if (!(v > 0.0)) throw ConfigError("tolerances must be positive");
  }
  if (!(t.rate_min <= t.rate_max)) throw ConfigError("rate_min must not exceed rate_max");
}

}  // namespace pwinterp::cli
