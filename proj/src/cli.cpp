#include "bnlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bnlab/ansatz6.hpp"
#include "bnlab/config.hpp"
#include "bnlab/errors.hpp"
#include "bnlab/spectral.hpp"
#include "bnlab/verify.hpp"

namespace bnlab {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string f6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct IoFailure {
  std::string what;
};

// Files are written only after every computation of the command succeeded.
class Outputs {
 public:
  std::ostringstream& add(const std::string& path) {
    bufs_.push_back({path, std::make_unique<std::ostringstream>()});
    return *bufs_.back().second;
  }
  void commit() const {
    for (const auto& [path, buf] : bufs_) {
      std::ofstream f(path, std::ios::binary);
      if (!f) throw IoFailure{"cannot write " + path};
      f << buf->str();
    }
  }

 private:
  std::vector<std::pair<std::string, std::unique_ptr<std::ostringstream>>> bufs_;
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--d-grid", "not a number: " + item);
    }
  }
  return out;
}

struct Common {
  std::string config_path;
  int jobs = 0;
  Config config;

  void load() {
    config = load_config(config_path);
    if (jobs > 0) config.jobs = jobs;
  }
};

int cmd_spectral(Common& c, Outputs& files, std::ostream& out, int N, int count, int samples, const std::string& mu_out,
                 const std::string& psi_out) {
  c.load();
  const SpectralBasis basis = SpectralBasis::build(N, count);
  if (!mu_out.empty()) {
    auto& os = files.add(mu_out);
    os << "h,mu,bessel_zero\n";
    for (int h = 1; h <= count; ++h)
      os << h << ',' << g17(basis.mus[h - 1]) << ',' << g17(std::sqrt(basis.mus[h - 1])) << '\n';
  }
  if (!psi_out.empty()) {
    auto& os = files.add(psi_out);
    os << "r";
    for (int h = 1; h <= count; ++h) os << ",psi_" << h;
    os << '\n';
    for (int i = 0; i <= samples; ++i) {
      const double r = static_cast<double>(i) / samples;
      os << g17(r);
      for (int h = 1; h <= count; ++h) os << ',' << g17(psi(N, h, r));
      os << '\n';
    }
  }
  for (int h = 1; h <= count; ++h) out << "mu_" << h << " " << f6(basis.mus[h - 1]) << '\n';
  return 0;
}

int cmd_branch(Common& c, Outputs& files, std::ostream& out, int N, int m, double a_min, double a_max, int per_decade,
               const std::string& path) {
  c.load();
  if (a_min <= 0) a_min = c.config.grid_a_min;
  if (a_max <= 0) a_max = c.config.grid_a_max;
  if (per_decade <= 0) per_decade = c.config.grid_per_decade;
  const BranchTable t = sweep(N, m, log_grid(a_min, a_max, per_decade), c.config.solver, c.config.jobs);
  if (!path.empty()) t.write_csv(files.add(path));
  std::size_t failed = 0;
  for (const auto& e : t.entries) failed += !e.point;
  out << "points " << t.entries.size() - failed << " failed " << failed << '\n';
  return 0;
}

int cmd_critical(Common& c, Outputs& files, std::ostream& out, int N, int m, int samples, const std::string& path) {
  c.load();
  const CriticalData d = lambda_bar(N, m, c.config.solver);
  out << "lambda_bar " << f6(d.lambda_bar) << '\n';
  out << "r_bar " << f6(d.r_bar) << '\n';
  if (!path.empty()) {
    if (!d.limit_profile) fail(ErrorKind::InvalidArgument, "profile samples exist only for N = 6");
    d.limit_profile->write_csv(files.add(path), samples);
  }
  return 0;
}

int cmd_v0(Common& c, Outputs& files, std::ostream& out, int m, int samples, const std::string& path) {
  c.load();
  const CriticalData d = lambda_bar(6, m, c.config.solver);
  const LinearizedBundle lin = solve_v0(d, c.config.linear_tol);
  out << "lambda_bar " << g17(lin.lambda_bar) << '\n';
  out << "v0_bar(0) " << g17(lin.v0_bar_at_0) << '\n';
  out << "1-2*v0_bar(0) " << g17(lin.sign_selector) << '\n';
  out << "1+2*v0(0) " << g17(lin.sign_selector) << '\n';
  out << "nondegeneracy_margin " << g17(lin.nondegeneracy_margin) << '\n';
  const char* side = "indeterminate";
  try {
    side = predict_sign(lin) == Side::Above ? "above" : "below";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Indeterminate) throw;
  }
  out << "predicted_side " << side << '\n';
  if (!path.empty()) {
    auto& os = files.add(path);
    os << "r,u_bar,v0_bar,h\n";
    for (int i = 0; i <= samples; ++i) {
      const double r = static_cast<double>(i) / samples;
      os << g17(r) << ',' << g17(lin.u_bar.u(r)) << ',' << g17(lin.v0_bar.u(r)) << ',' << g17(lin.h.u(r)) << '\n';
    }
  }
  return 0;
}

int cmd_ansatz(Common& c, Outputs& files, std::ostream& out, int m, double eps, const std::string& d_grid,
               double d_ref, const std::string& path) {
  c.load();
  if (std::isnan(eps)) eps = c.config.ansatz.eps;
  const CriticalData d = lambda_bar(6, m, c.config.solver);
  const LinearizedBundle lin = solve_v0(d, c.config.linear_tol);
  std::vector<double> grid;
  if (!d_grid.empty()) {
    grid = parse_list(d_grid);
  } else {
    const double d0 = ReducedEnergy::build(lin, eps).d0();
    if (!(d0 > 0)) fail(ErrorKind::DomainError, "no positive critical point for this sign of eps; pass --d-grid");
    const auto& a = c.config.ansatz;
    for (int i = 0; i < a.d_points; ++i) grid.push_back(d0 * (a.d_lo + (a.d_hi - a.d_lo) * i / (a.d_points - 1)));
  }
  const ReducedEnergyReport rep = reduced_energy_check(lin, eps, grid, d_ref, true);
  if (!path.empty()) {
    auto& os = files.add(path);
    os << "d,J,E,dUpsilon,residual_norm\n";
    for (const auto& r : rep.rows)
      os << g17(r.d) << ',' << g17(r.J) << ',' << g17(r.E) << ',' << g17(r.dUpsilon) << ',' << g17(r.residual_norm)
         << '\n';
  }
  out << "eps " << g17(rep.eps) << '\n';
  out << "d0 " << g17(rep.d0) << '\n';
  out << "d_extremum " << g17(rep.d_extremum) << '\n';
  out << "max_rel_error " << g17(rep.max_rel_error) << '\n';
  return 0;
}

int cmd_verify(Common& c, Outputs& files, std::ostream& out, int N, int m, const std::string& report,
               const std::string& tail_csv) {
  c.load();
  VerifyAux aux;
  aux.config = c.config;
  aux.critical = lambda_bar(N, m, c.config.solver);
  if (N == 6) aux.linear = solve_v0(aux.critical, c.config.linear_tol);
  const BranchTable table = tail_sweep(N, m, c.config);
  const VerifyReport rep = verify_theorem(N, m, table, aux);
  if (!report.empty()) files.add(report) << rep.to_json().dump(2) << '\n';
  if (!tail_csv.empty()) table.write_csv(files.add(tail_csv));
  int checks = 0, passed = 0;
  for (const auto& r : rep.rows) {
    if (r.kind != "check" && r.kind != "conditional") continue;
    ++checks;
    passed += r.pass;
  }
  out << "N=" << N << " m=" << m << " tail_points=" << rep.tail_size << " checks_passed=" << passed << "/" << checks
      << '\n';
  for (const auto& r : rep.rows)
    if ((r.kind == "check" || r.kind == "conditional") && !r.pass)
      out << "FAIL " << r.theorem << " " << r.display_id << '\n';
  return 0;
}

int cmd_report(Outputs& files, std::ostream& out, const std::vector<std::string>& inputs, const std::string& path) {
  nlohmann::json all = nlohmann::json::array();
  int checks = 0, passed = 0;
  for (const auto& in : inputs) {
    std::ifstream f(in);
    if (!f) throw IoFailure{"cannot read " + in};
    nlohmann::json j;
    try {
      f >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw IoFailure{"malformed JSON in " + in};
    }
    if (!j.contains("rows") || !j["rows"].is_array()) throw IoFailure{in + " is not a verify report"};
    int c = 0, p = 0;
    for (const auto& r : j["rows"]) {
      const std::string kind = r.value("kind", "check");
      if (kind != "check" && kind != "conditional") continue;
      ++c;
      p += r.value("pass", false);
    }
    checks += c;
    passed += p;
    all.push_back({{"source", in}, {"N", j.value("N", 0)}, {"m", j.value("m", 0)}, {"checks", c}, {"passed", p},
                   {"report", j}});
    out << in << " " << p << "/" << c << '\n';
  }
  if (!path.empty())
    files.add(path) << nlohmann::json{{"reports", all}, {"checks", checks}, {"passed", passed}}.dump(2) << '\n';
  out << "total " << passed << "/" << checks << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial nodal solutions of the critical Brezis-Nirenberg problem", "bnlab"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--config", common.config_path, "JSON config file (BN_CONFIG takes precedence)");
  app.add_option("--jobs", common.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);

  int N = 3, m = 2, count = 4, samples = 200, per_decade = 0;
  double a_min = 0, a_max = 0, eps = NAN, d_ref = 0;
  std::string o1, o2, d_grid;
  std::vector<std::string> inputs;
  auto dim = [&](CLI::App* s, bool required = true) {
    auto* opt = s->add_option("--dim", N, "dimension N")->check(CLI::Range(3, 6));
    if (required) opt->required();
  };
  auto zones = [&](CLI::App* s) { s->add_option("--zones", m, "nodal zones m")->required()->check(CLI::Range(2, 20)); };

  auto* spec = app.add_subcommand("spectral", "radial Dirichlet eigenvalues and eigenfunctions");
  dim(spec);
  spec->add_option("--count", count, "number of eigenvalues")->check(CLI::Range(1, 50));
  spec->add_option("--samples", samples, "psi samples on [0,1]")->check(CLI::PositiveNumber);
  spec->add_option("--out", o1, "CSV of mu_h");
  spec->add_option("--psi-out", o2, "CSV of psi_h samples");

  auto* br = app.add_subcommand("branch", "sweep of the branch u(0) = a");
  dim(br);
  zones(br);
  br->add_option("--a-min", a_min)->check(CLI::PositiveNumber);
  br->add_option("--a-max", a_max)->check(CLI::PositiveNumber);
  br->add_option("--per-decade", per_decade)->check(CLI::PositiveNumber);
  br->add_option("--out", o1, "CSV of the branch table");

  auto* cr = app.add_subcommand("critical", "concentration value and limit radius");
  dim(cr);
  zones(cr);
  cr->add_option("--samples", samples)->check(CLI::PositiveNumber);
  cr->add_option("--out", o1, "CSV of the N = 6 limit profile");

  auto* v0 = app.add_subcommand("v0", "linearized problem at the N = 6 limit profile");
  zones(v0);
  v0->add_option("--samples", samples)->check(CLI::PositiveNumber);
  v0->add_option("--out", o1, "CSV of u_bar, v0_bar, h");

  auto* an = app.add_subcommand("ansatz", "reduced energy of the N = 6 ansatz");
  zones(an);
  an->add_option("--eps", eps, "lambda - lambda_bar, 0 < |eps| <= 0.1");
  an->add_option("--d-grid", d_grid, "comma separated d values (default: around d0)");
  an->add_option("--d-ref", d_ref, "reference d (default d0)");
  an->add_option("--out", o1, "CSV d,J,E,dUpsilon,residual_norm");

  auto* ve = app.add_subcommand("verify", "blow-up laws on the branch tail");
  dim(ve);
  zones(ve);
  ve->add_option("--report", o1, "JSON report");
  ve->add_option("--tail-csv", o2, "CSV of the tail sweep");

  auto* rp = app.add_subcommand("report", "aggregate verify reports");
  rp->add_option("inputs", inputs, "verify JSON reports")->required()->check(CLI::ExistingFile);
  rp->add_option("--out", o1, "aggregated JSON");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  Outputs files;
  try {
    int rc = 0;
    if (spec->parsed()) rc = cmd_spectral(common, files, out, N, count, samples, o1, o2);
    else if (br->parsed()) rc = cmd_branch(common, files, out, N, m, a_min, a_max, per_decade, o1);
    else if (cr->parsed()) rc = cmd_critical(common, files, out, N, m, samples, o1);
    else if (v0->parsed()) rc = cmd_v0(common, files, out, m, samples, o1);
    else if (an->parsed()) rc = cmd_ansatz(common, files, out, m, eps, d_grid, d_ref, o1);
    else if (ve->parsed()) rc = cmd_verify(common, files, out, N, m, o1, o2);
    else if (rp->parsed()) rc = cmd_report(files, out, inputs, o1);
    files.commit();
    return rc;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const IoFailure& e) {
    err << "error: " << e.what << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::ConfigError ? 1 : 2;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace bnlab
