#include "bnlab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "bnlab/errors.hpp"

namespace bnlab {

using nlohmann::json;

namespace {

// Walks one JSON object, rejecting keys the caller does not consume.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) fail(ErrorKind::ConfigError, path_ + " must be an object");
  }
  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions()) return;
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) fail(ErrorKind::ConfigError, "unknown key " + path_ + "." + k);
  }

  void number(const char* key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) fail(ErrorKind::ConfigError, path_ + "." + key + " must be a number");
      out = v->get<double>();
    }
  }
  void integer(const char* key, int& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) fail(ErrorKind::ConfigError, path_ + "." + key + " must be an integer");
      out = v->get<int>();
    }
  }
  void numbers(const char* key, std::vector<double>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) fail(ErrorKind::ConfigError, path_ + "." + key + " must be an array");
      out.clear();
      for (const auto& x : *v) {
        if (!x.is_number()) fail(ErrorKind::ConfigError, path_ + "." + key + " must hold numbers");
        out.push_back(x.get<double>());
      }
    }
  }
  const json* object(const char* key) { return take(key); }
  std::string path(const char* key) const { return path_ + "." + key; }

 private:
  const json* take(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_tail(const json& j, const std::string& path, TailConfig& t) {
  Reader r(j, path);
  r.number("a_min", t.a_min);
  r.number("a_max", t.a_max);
  r.integer("per_decade", t.per_decade);
  r.number("tol", t.tol);
  r.number("window_lo", t.window_lo);
  r.number("window_hi", t.window_hi);
}

void validate(const Config& c) {
  auto positive = [](double x, const char* what) {
    if (!(x > 0)) fail(ErrorKind::ConfigError, std::string(what) + " must be positive");
  };
  positive(c.solver.tol_rel, "solver.tol_rel");
  positive(c.solver.tol_abs, "solver.tol_abs");
  positive(c.solver.r_max, "solver.r_max");
  positive(c.grid_a_min, "grid.a_min");
  if (!(c.grid_a_max > c.grid_a_min)) fail(ErrorKind::ConfigError, "grid.a_max must exceed grid.a_min");
  if (c.grid_per_decade < 1) fail(ErrorKind::ConfigError, "grid.per_decade must be >= 1");
  for (const auto& t : c.tail) {
    positive(t.a_min, "tail.a_min");
    positive(t.tol, "tail.tol");
    positive(t.window_lo, "tail.window_lo");
    if (!(t.a_max > t.a_min)) fail(ErrorKind::ConfigError, "tail.a_max must exceed tail.a_min");
    if (!(t.window_hi > t.window_lo)) fail(ErrorKind::ConfigError, "tail.window_hi must exceed tail.window_lo");
    if (t.per_decade < 1) fail(ErrorKind::ConfigError, "tail.per_decade must be >= 1");
  }
  const auto& a = c.ansatz;
  if (!(a.eps > 0 && a.eps <= 0.1)) fail(ErrorKind::ConfigError, "ansatz.eps must lie in (0, 0.1]");
  for (double e : a.eps_grid)
    if (!(e > 0 && e <= 0.1)) fail(ErrorKind::ConfigError, "ansatz.eps_grid entries must lie in (0, 0.1]");
  if (a.per_decade < 10) fail(ErrorKind::ConfigError, "ansatz.per_decade must be >= 10");
  if (!(a.d_lo > 0 && a.d_hi > a.d_lo)) fail(ErrorKind::ConfigError, "ansatz.d_lo/d_hi invalid");
  if (a.d_points < 3) fail(ErrorKind::ConfigError, "ansatz.d_points must be >= 3");
  positive(c.linear_tol, "linear_tol");
  if (c.jobs < 1) fail(ErrorKind::ConfigError, "jobs must be >= 1");
}

}  // namespace

const TailConfig& Config::tail_for(int N) const {
  if (N < 3 || N > 6) fail(ErrorKind::InvalidArgument, "dimension must be 3..6");
  return tail[N - 3];
}

Config default_config() {
  Config c;
  // Windows sit where the next-order corrections are below the report
  // tolerances; N = 4 fits its last a-decade instead.
  c.tail[0] = {1e2, 5e3, 20, 1e-13, 1e-7, 1e-3};
  c.tail[1] = {1e4, 1e20, 4, 1e-13, 1e-30, 1e-1};
  c.tail[2] = {1e10, 1e20, 4, 1e-13, 5e-10, 5e-6};
  c.tail[3] = {3e10, 3e18, 4, 1e-13, 1e-9, 1e-5};
  validate(c);
  return c;
}

Config config_from_json(const json& j) {
  Config c = default_config();
  {
    Reader r(j, "config");
    if (const json* s = r.object("solver")) {
      Reader rs(*s, r.path("solver"));
      rs.number("tol_rel", c.solver.tol_rel);
      rs.number("tol_abs", c.solver.tol_abs);
      rs.number("r_max", c.solver.r_max);
    }
    if (const json* g = r.object("grid")) {
      Reader rg(*g, r.path("grid"));
      rg.number("a_min", c.grid_a_min);
      rg.number("a_max", c.grid_a_max);
      rg.integer("per_decade", c.grid_per_decade);
    }
    if (const json* t = r.object("tail")) {
      Reader rt(*t, r.path("tail"));
      for (int N = 3; N <= 6; ++N) {
        const std::string key = std::to_string(N);
        if (const json* tn = rt.object(key.c_str())) read_tail(*tn, rt.path(key.c_str()), c.tail[N - 3]);
      }
    }
    if (const json* t = r.object("tolerances")) {
      Reader rt(*t, r.path("tolerances"));
      auto& x = c.tolerances;
      rt.number("prefactor", x.prefactor);
      rt.number("prefactor_n3", x.prefactor_n3);
      rt.number("prefactor_n6", x.prefactor_n6);
      rt.number("exponent_n3", x.exponent_n3);
      rt.number("exponent_n5", x.exponent_n5);
      rt.number("r_exponent", x.r_exponent);
      rt.number("exponent_n6", x.exponent_n6);
      rt.number("trend_drift", x.trend_drift);
      rt.number("lambda_bar_rel", x.lambda_bar_rel);
      rt.number("anchor", x.anchor);
      rt.number("min_margin", x.min_margin);
      rt.number("energy_match", x.energy_match);
      rt.number("residual_exponent", x.residual_exponent);
    }
    if (const json* a = r.object("ansatz")) {
      Reader ra(*a, r.path("ansatz"));
      ra.number("eps", c.ansatz.eps);
      ra.numbers("eps_grid", c.ansatz.eps_grid);
      ra.integer("per_decade", c.ansatz.per_decade);
      ra.number("d_lo", c.ansatz.d_lo);
      ra.number("d_hi", c.ansatz.d_hi);
      ra.integer("d_points", c.ansatz.d_points);
    }
    r.number("linear_tol", c.linear_tol);
    r.integer("jobs", c.jobs);
  }
  validate(c);
  return c;
}

json config_to_json(const Config& c) {
  json j;
  j["solver"] = {{"tol_rel", c.solver.tol_rel}, {"tol_abs", c.solver.tol_abs}, {"r_max", c.solver.r_max}};
  j["grid"] = {{"a_min", c.grid_a_min}, {"a_max", c.grid_a_max}, {"per_decade", c.grid_per_decade}};
  for (int N = 3; N <= 6; ++N) {
    const auto& t = c.tail[N - 3];
    j["tail"][std::to_string(N)] = {{"a_min", t.a_min},         {"a_max", t.a_max},
                                    {"per_decade", t.per_decade}, {"tol", t.tol},
                                    {"window_lo", t.window_lo}, {"window_hi", t.window_hi}};
  }
  const auto& x = c.tolerances;
  j["tolerances"] = {{"prefactor", x.prefactor},
                     {"prefactor_n3", x.prefactor_n3},
                     {"prefactor_n6", x.prefactor_n6},
                     {"exponent_n3", x.exponent_n3},
                     {"exponent_n5", x.exponent_n5},
                     {"r_exponent", x.r_exponent},
                     {"exponent_n6", x.exponent_n6},
                     {"trend_drift", x.trend_drift},
                     {"lambda_bar_rel", x.lambda_bar_rel},
                     {"anchor", x.anchor},
                     {"min_margin", x.min_margin},
                     {"energy_match", x.energy_match},
                     {"residual_exponent", x.residual_exponent}};
  j["ansatz"] = {{"eps", c.ansatz.eps},         {"eps_grid", c.ansatz.eps_grid},
                 {"per_decade", c.ansatz.per_decade}, {"d_lo", c.ansatz.d_lo},
                 {"d_hi", c.ansatz.d_hi},       {"d_points", c.ansatz.d_points}};
  j["linear_tol"] = c.linear_tol;
  j["jobs"] = c.jobs;
  return j;
}

Config load_config(const std::string& path) {
  std::string p = path;
  if (const char* env = std::getenv("BN_CONFIG"); env && *env) p = env;
  if (p.empty()) return default_config();
  std::ifstream in(p);
  if (!in) fail(ErrorKind::ConfigError, "cannot open " + p);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, std::string("parse error in ") + p + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace bnlab
