#include "bnlab/critical.hpp"

#include <cmath>
#include <numbers>

#include "bnlab/errors.hpp"
#include "bnlab/spectral.hpp"

namespace bnlab {

namespace {

// (m-1)-th zero of the N = 6 shot with u(0) = central at parameter lam.
Trajectory shot6(int m, double lam, double central, const ShootOptions& opt) {
  IvpSpec spec;
  spec.N = 6;
  spec.lambda = lam;
  spec.a = central;
  spec.r_max = opt.r_max;
  spec.tol_rel = opt.tol_rel;
  spec.tol_abs = opt.tol_abs;
  return integrate(spec, StopRule{m - 1, true});
}

}  // namespace

CriticalData lambda_bar(int N, int m, const ShootOptions& opt, double shot_lambda) {
  if (m < 2) fail(ErrorKind::InvalidArgument, "concentration values need m >= 2");
  CriticalData d;
  d.N = N;
  d.m = m;
  switch (N) {
    case 3:
      d.lambda_bar = std::pow((2 * m - 1) * std::numbers::pi / 2, 2);
      d.r_bar = 1.0 / (2 * m - 1);
      break;
    case 4:
    case 5:
      d.lambda_bar = mu(N, m - 1);
      break;
    case 6: {
      if (!(shot_lambda > 0)) fail(ErrorKind::InvalidArgument, "shot parameter must be positive");
      const Trajectory t = shot6(m, shot_lambda, -0.5 * shot_lambda, opt);
      const double R = t.zeros()[m - 2];
      d.lambda_bar = shot_lambda * R * R;
      d.limit_profile = RadialProfile::from_trajectory(t, R, R * R, d.lambda_bar, 1.0);
      break;
    }
    default:
      fail(ErrorKind::InvalidArgument, "N must be in {3,4,5,6}");
  }
  return d;
}

bool OverdeterminedReport::ok(int m) const {
  return boundary_value < 1e-10 && std::abs(central_ratio + 0.5) < 1e-12 && interior_zeros == m - 2 &&
         perturbed_gap_minus != 0.0 && perturbed_gap_plus != 0.0 && (perturbed_gap_minus > 0) != (perturbed_gap_plus > 0);
}

OverdeterminedReport verify_overdetermined(const CriticalData& data, const ShootOptions& opt) {
  if (data.N != 6 || !data.limit_profile) fail(ErrorKind::InvalidArgument, "needs N = 6 critical data");
  OverdeterminedReport rep;
  const auto& v = *data.limit_profile;
  rep.boundary_value = std::abs(v.u(1.0));
  rep.central_ratio = v.u(0.0) / data.lambda_bar;
  const int samples = 4000;
  double prev = v.u(0.0);
  for (int i = 1; i < samples; ++i) {
    const double cur = v.u(static_cast<double>(i) / samples);
    if ((cur < 0) != (prev < 0)) ++rep.interior_zeros;
    prev = cur;
  }
  auto gap = [&](double factor) {
    const Trajectory t = shot6(data.m, 1.0, -0.5 * factor, opt);
    const double R = t.zeros()[data.m - 2];
    return R * R - data.lambda_bar;
  };
  rep.perturbed_gap_minus = gap(1 - 1e-3);
  rep.perturbed_gap_plus = gap(1 + 1e-3);
  return rep;
}

}  // namespace bnlab
