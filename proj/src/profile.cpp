#include "bnlab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>

#include "bnlab/numerics.hpp"
#include "bnlab/radial_ivp.hpp"

namespace bnlab {

RadialProfile::RadialProfile(int N, double lambda, double r_end, Eval eval, std::vector<double> knots)
    : N_(N), lambda_(lambda), r_end_(r_end), eval_(std::move(eval)), knots_(std::move(knots)) {
  std::erase_if(knots_, [r_end](double x) { return !(x > 0.0 && x < r_end); });
  std::sort(knots_.begin(), knots_.end());
  knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
}

RadialProfile RadialProfile::from_trajectory(const Trajectory& traj, double scale, double amp, double lambda,
                                             double r_end) {
  auto t = std::make_shared<const Trajectory>(traj);
  std::vector<double> knots;
  for (double x : t->nodes()) knots.push_back(x / scale);
  for (double z : t->zeros()) knots.push_back(z / scale);
  auto eval = [t, scale, amp](double r) -> ode::State<2> {
    const auto y = t->eval(std::min(scale * r, t->r_end()));
    return {amp * y[0], amp * scale * y[1]};
  };
  return RadialProfile(traj.spec().N, lambda, r_end, eval, std::move(knots));
}

RadialProfile RadialProfile::scaled(double c) const {
  auto inner = eval_;
  RadialProfile p(N_, lambda_, r_end_, [inner, c](double r) -> ode::State<2> {
    const auto y = inner(r);
    return {c * y[0], c * y[1]};
  });
  p.knots_ = knots_;
  return p;
}

double RadialProfile::integrate(const std::function<double(double, double, double)>& g, double lo,
                                double hi) const {
  std::vector<double> panels{lo};
  // Geometric panels resolve the concentrated cores near the origin.
  if (lo == 0.0) {
    double x = std::min(1e-12, hi);
    panels.push_back(x);
    while (x * 2 < hi) panels.push_back(x *= 2);
  }
  for (double k : knots_)
    if (k > lo && k < hi) panels.push_back(k);
  panels.push_back(hi);
  std::sort(panels.begin(), panels.end());
  panels.erase(std::unique(panels.begin(), panels.end()), panels.end());
  const int N = N_;
  auto f = [&](double r) {
    const auto y = eval_(r);
    return g(r, y[0], y[1]) * std::pow(r, N - 1);
  };
  return num::integrate_panels(f, panels, 10);
}

void RadialProfile::write_csv(std::ostream& os, int samples) const {
  os << "r,u,u_prime\n";
  char buf[96];
  for (int i = 0; i <= samples; ++i) {
    const double r = r_end_ * i / samples;
    const auto y = eval_(r);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r, y[0], y[1]);
    os << buf;
  }
}

}  // namespace bnlab
