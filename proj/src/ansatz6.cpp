#include "bnlab/ansatz6.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "bnlab/errors.hpp"
#include "bnlab/numerics.hpp"

namespace bnlab {

namespace {

using num::sq;

// The panels are fine enough that a fixed rule per panel suffices.
template <class F>
double panel_integral(const std::vector<double>& panels, F&& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < panels.size(); ++i)
    sum += boost::math::quadrature::gauss<double, 10>::integrate(
        [&](double r) { return f(r) * sq(r * r) * r; }, panels[i], panels[i + 1]);
  return sum;
}

void add_geometric(std::vector<double>& out, double lo, double hi, int per_decade) {
  lo = std::max(lo, 1e-300);
  hi = std::min(hi, 1.0);
  if (!(hi > lo)) return;
  for (double x : num::geometric_grid(lo, hi, per_decade)) out.push_back(x);
}

}  // namespace

double sigma6() { return std::pow(std::numbers::pi, 3); }

Bubble::Bubble(double d) : delta(d) {
  if (!(d > 0)) fail(ErrorKind::InvalidArgument, "bubble scale must be positive");
}

double Bubble::u(double r) const { return kAlpha6 * sq(delta) / sq(sq(delta) + sq(r)); }

double Bubble::u_prime(double r) const { return -4 * kAlpha6 * sq(delta) * r / std::pow(sq(delta) + sq(r), 3); }

double Bubble::u_second(double r) const {
  const double q = sq(delta) + sq(r);
  return -4 * kAlpha6 * sq(delta) / std::pow(q, 3) + 24 * kAlpha6 * sq(delta) * sq(r) / std::pow(q, 4);
}

double Bubble::z(double r) const { return 2 * kAlpha6 * delta * (sq(r) - sq(delta)) / std::pow(sq(delta) + sq(r), 3); }

double ProjectedBubble::pu_by_quadrature(double r) const {
  const double d = bubble.delta;
  auto u2 = [this](double t) { return sq(bubble.u(t)); };
  std::vector<double> cuts{0.0};
  for (double x = d * 1e-3; x < 1.0; x *= 2) cuts.push_back(x);
  cuts.push_back(1.0);
  auto split = [&](double lo, double hi) {
    std::vector<double> p{lo};
    for (double c : cuts)
      if (c > lo && c < hi) p.push_back(c);
    p.push_back(hi);
    return p;
  };
  // Dyadic panels resolve the rational integrands; a fixed rule per panel is enough.
  auto gauss = [&](auto g, const std::vector<double>& x) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
      if (x[i + 1] > x[i]) sum += boost::math::quadrature::gauss<double, 30>::integrate(g, x[i], x[i + 1]);
    return sum;
  };
  auto F = [&](double s) { return gauss([&](double t) { return std::pow(t, 5) * u2(t); }, split(0.0, s)); };
  const double inner = r > 0 ? F(r) / std::pow(r, 4) : 0.0;
  const double tail = gauss([&](double t) { return t * u2(t); }, split(r, 1.0));
  return (inner - F(1.0) + tail) / 4.0;
}

ProjectedBubble project_bubble(double delta) {
  if (!(delta > 0 && delta < 0.3)) fail(ErrorKind::InvalidArgument, "delta must lie in (0, 0.3)");
  return ProjectedBubble(delta);
}

double bubble_level_radius(double delta, double level) {
  const Bubble b(delta);
  if (!(level > 0 && level < b.u(0.0))) fail(ErrorKind::InvalidArgument, "level outside the bubble range");
  double hi = delta;
  while (b.u(hi) > level) hi *= 2;
  return num::find_root([&](double r) { return b.u(r) - level; }, 0.0, hi, 1e-14);
}

double AnsatzBundle::background(double r) const { return lin.u_bar.u(r) + eps * lin.v0_bar.u(r); }

AnsatzBundle build_ansatz(const LinearizedBundle& lin, double eps, double d, int per_decade) {
  if (!(std::abs(eps) <= 0.1) || eps == 0.0) fail(ErrorKind::InvalidArgument, "need 0 < |eps| <= 0.1");
  if (!(d > 0)) fail(ErrorKind::InvalidArgument, "d must be positive");
  AnsatzBundle b;
  b.eps = eps;
  b.d = d;
  b.delta = std::abs(eps) * d;
  b.lambda_bar = lin.lambda_bar;
  b.lin = lin;
  b.pu = ProjectedBubble(b.delta);

  const double delta = b.delta;
  const double R0 = std::pow(kAlpha6 / lin.u_bar.u(0.0), 0.25);
  const double level = R0 * std::sqrt(delta);
  std::vector<double> p{0.0};
  add_geometric(p, delta * 1e-6, 1.0, per_decade);
  add_geometric(p, delta / 10, delta * 10, 2 * per_decade);
  add_geometric(p, level / 10, level * 10, 2 * per_decade);
  for (double k : lin.u_bar.knots()) p.push_back(k);
  // Sign change of W: the piecewise formulas switch there.
  auto diff = [&](double r) { return b.background(r) - b.pu.pu(r); };
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  std::vector<double> extra;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double fa = diff(p[i]), fb = diff(p[i + 1]);
    if ((fa < 0) != (fb < 0)) extra.push_back(num::find_root(diff, p[i], p[i + 1], 1e-15));
  }
  p.insert(p.end(), extra.begin(), extra.end());
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  b.panels = p;

  auto ub = lin.u_bar, v0 = lin.v0_bar;
  const ProjectedBubble pu = b.pu;
  b.W = RadialProfile(6, lin.lambda_bar + eps, 1.0, [ub, v0, pu, eps](double r) -> ode::State<2> {
    const auto a = ub.eval(r), v = v0.eval(r);
    return {a[0] + eps * v[0] - pu.pu(r), a[1] + eps * v[1] - pu.pu_prime(r)};
  }, p);
  return b;
}

double residual(const AnsatzBundle& b, double r) {
  const double eps = b.eps, lb = b.lambda_bar;
  const double u = b.lin.u_bar.u(r), v = b.lin.v0_bar.u(r);
  const double A = u + eps * v;
  const double U = b.pu.bubble.u(r), c = b.pu.bubble.u(1.0);
  const double P = U - c;
  // |W|W + P^2 with W = A - P, arranged to avoid cancellation in the core.
  const double wwp = A < P ? 2 * P * A - A * A : sq(A - P) + sq(P);
  return std::abs(u) * u + 2 * eps * std::abs(u) * v - eps * eps * v + (lb + eps) * P - c * (2 * U - c) - wwp;
}

double residual_norm(const AnsatzBundle& b) {
  const double I = panel_integral(b.panels, [&b](double r) { return std::pow(std::abs(residual(b, r)), 1.5); });
  return std::pow(sigma6() * I, 2.0 / 3.0);
}

double energy(const RadialProfile& u, double lambda) {
  const int N = u.N();
  const double q = 2.0 * N / (N - 2);
  const double I = u.integrate(
      [lambda, q](double, double v, double vp) { return 0.5 * vp * vp - 0.5 * lambda * v * v - std::pow(std::abs(v), q) / q; },
      0.0, u.r_end());
  const double sN = 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
  return sN * I;
}

double energy(const AnsatzBundle& b) {
  const double lam = b.lambda_bar + b.eps;
  const double I = panel_integral(b.panels, [&](double r) {
    const auto y = b.W.eval(r);
    return 0.5 * y[1] * y[1] - 0.5 * lam * y[0] * y[0] - std::pow(std::abs(y[0]), 3) / 3;
  });
  return sigma6() * I;
}

double energy_d_part(const AnsatzBundle& b) {
  const double lam = b.lambda_bar + b.eps;
  const Bubble& U = b.pu.bubble;
  const double c = U.u(1.0);
  auto g = [&](double r) {
    const double A = b.background(r);
    const double Ur = U.u(r), P = Ur - c;
    double t;  // T - P^2 A with T = -(|A-P|^3 - |A|^3 - P^3)/3
    if (A <= 0)
      t = -P * A * A;
    else if (A < P)
      t = -P * A * A + 2.0 / 3.0 * A * A * A;
    else
      t = A * A * P - 2 * A * P * P + 2.0 / 3.0 * P * P * P;
    return -0.5 * lam * P * P + lam * A * P - A * c * (2 * Ur - c) + t;
  };
  const double main = panel_integral(b.panels, g);
  // Bubble-only terms: (1/6) int_B P^3 + (1/2) int_B P (U^2 - P^2) - (1/6) int_{R^6} U^3.
  const double iu2 = panel_integral(b.panels, [&](double r) { return sq(U.u(r)); });
  const double iu = panel_integral(b.panels, [&](double r) { return U.u(r); });
  const double outside = num::integrate([&](double r) { return std::pow(r, 5) * std::pow(U.u(r), 3); }, 1.0,
                                        std::numeric_limits<double>::infinity(), 1e-13, 15);
  const double bubble_terms = 0.5 * c * iu2 - c * c * iu + c * c * c / 18.0 - outside / 6.0;
  return sigma6() * (main + bubble_terms);
}

ReducedEnergy ReducedEnergy::build(const LinearizedBundle& lin, double eps) {
  ReducedEnergy e;
  const double s6 = sigma6();
  e.a1 = 96 * s6;
  e.a2 = 11.0 / 9.0 * s6 * std::pow(kAlpha6, 1.5) * std::pow(lin.u_bar.u(0.0), 1.5);
  e.selector = lin.sign_selector;
  e.sgn_eps = eps >= 0 ? 1.0 : -1.0;
  return e;
}

double ReducedEnergy::upsilon(double d) const { return sgn_eps * selector * d * d * a1 - d * d * d * a2; }

double ReducedEnergy::d0() const {
  const double v = 2 * a1 / (3 * a2) * sgn_eps * selector;
  return v > 0 ? v : std::numeric_limits<double>::quiet_NaN();
}

double d0_closed_form(const LinearizedBundle& lin) {
  return 8 * std::sqrt(3.0) / 11 * std::abs(lin.sign_selector) / std::pow(lin.lambda_bar, 1.5);
}

double a1_by_quadrature() {
  auto f = [](double r) { return std::pow(r, 5) / std::pow(1 + r * r, 4); };
  const double I = num::integrate(f, 0.0, 1.0, 1e-14, 15) +
                   num::integrate(f, 1.0, std::numeric_limits<double>::infinity(), 1e-14, 15);
  return kAlpha6 * kAlpha6 * sigma6() * I;
}

ReducedEnergyReport reduced_energy_check(const LinearizedBundle& lin, double eps, const std::vector<double>& d_grid,
                                         double d_ref, bool with_residual) {
  predict_sign(lin);
  const ReducedEnergy re = ReducedEnergy::build(lin, eps);
  ReducedEnergyReport rep;
  rep.eps = eps;
  rep.d0 = std::isnan(re.d0()) ? d0_closed_form(lin) : re.d0();
  rep.d_ref = d_ref > 0 ? d_ref : rep.d0;
  const double e3 = std::pow(std::abs(eps), 3);
  const AnsatzBundle ref = build_ansatz(lin, eps, rep.d_ref);
  const double D_ref = energy_d_part(ref);
  const double J_ref = energy(ref);
  for (double d : d_grid) {
    ReducedEnergyRow row;
    row.d = d;
    const AnsatzBundle b = build_ansatz(lin, eps, d);
    const double D = energy_d_part(b);
    row.J = J_ref + (D - D_ref);
    row.E = (D - D_ref) / e3;
    row.dUpsilon = re.upsilon(d) - re.upsilon(rep.d_ref);
    if (std::abs(d - rep.d_ref) > 1e-12 * rep.d_ref) {
      row.rel_error = std::abs(row.E - row.dUpsilon) / std::abs(row.dUpsilon);
      rep.max_rel_error = std::max(rep.max_rel_error, row.rel_error);
    }
    if (with_residual) row.residual_norm = residual_norm(b);
    rep.rows.push_back(row);
  }
  // Parabolic refinement around the largest E.
  const auto& rows = rep.rows;
  std::size_t k = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].E > rows[k].E) k = i;
  rep.d_extremum = rows.empty() ? 0.0 : rows[k].d;
  if (k > 0 && k + 1 < rows.size()) {
    const double x0 = rows[k - 1].d, x1 = rows[k].d, x2 = rows[k + 1].d;
    const double y0 = rows[k - 1].E, y1 = rows[k].E, y2 = rows[k + 1].E;
    const double den = (x0 - x1) * (x0 - x2) * (x1 - x2);
    const double A = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den;
    const double B = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / den;
    if (A < 0) rep.d_extremum = -B / (2 * A);
  }
  return rep;
}

}  // namespace bnlab
