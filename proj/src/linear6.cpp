#include "bnlab/linear6.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "bnlab/errors.hpp"
#include "bnlab/numerics.hpp"

namespace bnlab {

namespace {

using S6 = ode::State<6>;

// Solution of the coupled system (u, u', p, p', h, h') in the scaled variable
// rho with lambda = 1 and u(0) = 1/2.
struct ScaledSystem {
  double r0 = 0.0;
  double u0 = 0.5;
  double t = 1.0;  // source multiplier
  std::vector<ode::DenseStep<6>> steps;
  std::vector<double> zeros;

  S6 taylor(double r) const {
    const double c = (std::abs(u0) * u0 + u0) / 12.0, q = (2 * std::abs(u0) + 1) / 12.0;
    return {u0 - c * r * r, -2 * c * r, -t * u0 * r * r / 12.0, -t * u0 * r / 6.0, 1 - q * r * r, -2 * q * r};
  }

  S6 eval(double r) const {
    if (r <= r0 || steps.empty()) return taylor(r);
    auto it = std::upper_bound(steps.begin(), steps.end(), r, [](double x, const auto& s) { return x < s.r0; });
    const auto& s = it == steps.begin() ? steps.front() : *std::prev(it);
    return s.eval(std::min(r, s.r1()));
  }
};

std::shared_ptr<ScaledSystem> solve_scaled(int zeros_needed, double t, double tol_rel) {
  auto sys = std::make_shared<ScaledSystem>();
  sys->r0 = 1e-6;
  sys->t = t;
  auto rhs = [t](double r, const S6& y) -> S6 {
    const double u = y[0], w = 2 * std::abs(u) + 1;
    return {y[1], -5 / r * y[1] - std::abs(u) * u - u, y[3], -5 / r * y[3] - w * y[2] - t * u,
            y[5], -5 / r * y[5] - w * y[4]};
  };
  ode::Options opt;
  opt.rtol = tol_rel;
  opt.atol = tol_rel * 1e-3;
  opt.h_init = sys->r0;
  auto observer = [&](const ode::DenseStep<6>& s) {
    sys->steps.push_back(s);
    const auto& st = sys->steps.back();
    if ((st.start()[0] > 0) != (st.end()[0] > 0)) {
      sys->zeros.push_back(num::find_root([&](double x) { return st.component(0, x); }, st.r0, st.r1(), 1e-15));
      if (static_cast<int>(sys->zeros.size()) >= zeros_needed) return false;
    }
    return true;
  };
  ode::integrate<6>(rhs, sys->r0, sys->taylor(sys->r0), 200.0, opt, observer);
  if (static_cast<int>(sys->zeros.size()) < zeros_needed) fail(ErrorKind::TooFewZeros, "limit profile lacks zeros");
  return sys;
}

RadialProfile component_profile(const std::shared_ptr<ScaledSystem>& sys, int idx, double R, double amp, double lam,
                                std::function<double(const S6&)> combine = {}) {
  std::vector<double> knots;
  for (const auto& s : sys->steps) knots.push_back(s.r1() / R);
  auto eval = [sys, idx, R, amp, combine](double r) -> ode::State<2> {
    const S6 y = sys->eval(R * r);
    if (combine) {
      // combine maps the state to a value; the derivative uses the paired
      // slot one index up.
      S6 d = y;
      for (int i = 0; i < 6; i += 2) d[i] = y[i + 1];
      return {amp * combine(y), amp * R * combine(d)};
    }
    return {amp * y[idx], amp * R * y[idx + 1]};
  };
  return RadialProfile(6, lam, 1.0, eval, std::move(knots));
}

}  // namespace

LinearizedBundle solve_v0_scaled_source(const CriticalData& critical, double t, double tol_rel) {
  if (critical.N != 6) fail(ErrorKind::InvalidArgument, "linearized analysis needs N = 6");
  const int m = critical.m;
  auto sys = solve_scaled(m - 1, t, tol_rel);
  const double R = sys->zeros[m - 2];
  const S6 end = sys->eval(R);

  double hmax = 1.0;
  for (const auto& s : sys->steps) {
    if (s.r0 > R) break;
    for (int j = 1; j <= 4; ++j) hmax = std::max(hmax, std::abs(s.component(4, std::min(R, s.r0 + s.h * j / 4))));
  }

  LinearizedBundle b;
  b.m = m;
  b.lambda_bar = R * R;
  b.nondegeneracy_margin = std::abs(end[4]) / hmax;
  if (b.nondegeneracy_margin < 1e-6) fail(ErrorKind::Degenerate, "linearized operator is numerically degenerate");
  const double c = -end[2] / end[4];
  b.v0_bar_at_0 = c;
  b.sign_selector = 1.0 - 2.0 * c;
  b.u_bar = component_profile(sys, 0, R, R * R, b.lambda_bar);
  b.h = component_profile(sys, 4, R, 1.0, b.lambda_bar);
  b.v0_bar = component_profile(sys, 2, R, 1.0, b.lambda_bar, [c](const S6& y) { return y[2] + c * y[4]; });
  return b;
}

LinearizedBundle solve_v0(const CriticalData& critical, double tol_rel) {
  return solve_v0_scaled_source(critical, 1.0, tol_rel);
}

Z0Data z0_crosscheck(const LinearizedBundle& b, int samples) {
  Z0Data z;
  const double lb = b.lambda_bar;
  auto ub = b.u_bar, v0 = b.v0_bar;
  z.w0 = RadialProfile(6, lb, 1.0, [ub](double r) -> ode::State<2> {
    const auto y = ub.eval(r);
    // w0' = (3/2) u' + (r/2) u''; u'' from the equation.
    const double upp = r > 0 ? -5 / r * y[1] - std::abs(y[0]) * y[0] - ub.lambda() * y[0]
                             : -(std::abs(y[0]) * y[0] + ub.lambda() * y[0]) / 6;
    return {0.5 * r * y[1] + y[0], 1.5 * y[1] + 0.5 * r * upp};
  }, ub.knots());
  auto w0 = z.w0;
  z.z0 = RadialProfile(6, lb, 1.0, [w0, v0, lb](double r) -> ode::State<2> {
    const auto a = w0.eval(r), v = v0.eval(r);
    return {a[0] - lb * v[0], a[1] - lb * v[1]};
  }, ub.knots());

  z.z0_at_0 = z.z0.u(0.0);
  z.z0_at_1 = z.z0.u(1.0);
  const double target1 = 0.5 * b.u_bar.u_prime(1.0);
  z.boundary_rel_error = std::abs(z.z0_at_1 - target1) / std::abs(target1);
  z.center_error = std::abs(z.z0_at_0 - b.u_bar.u(0.0) * b.sign_selector);
  double zmax = 0.0, dev = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double r = static_cast<double>(i) / samples;
    const double zr = z.z0.u(r);
    zmax = std::max(zmax, std::abs(zr));
    dev = std::max(dev, std::abs(zr - z.z0_at_0 * b.h.u(r)));
  }
  z.proportionality_error = dev / zmax;
  return z;
}

Side predict_sign(double sel) {
  if (!(std::abs(sel) > 1e-6)) fail(ErrorKind::Indeterminate, "sign selector is numerically zero");
  return sel > 0 ? Side::Above : Side::Below;
}

Side predict_sign(const LinearizedBundle& bundle) { return predict_sign(bundle.sign_selector); }

}  // namespace bnlab
