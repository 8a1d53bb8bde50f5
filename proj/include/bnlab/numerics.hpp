#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "bnlab/errors.hpp"

namespace bnlab::num {

/// Bracketed root of f on [lo, hi]; f(lo) and f(hi) must differ in sign
/// (a zero endpoint is returned directly).
template <class F>
double find_root(F&& f, double lo, double hi, double rel_tol = 1e-14) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) fail(ErrorKind::RangeError, "find_root: interval does not bracket a root");
  const double abs_floor = 4 * std::numeric_limits<double>::min();
  auto tol = [rel_tol, abs_floor](double a, double b) {
    return std::abs(b - a) <= std::max(rel_tol * std::min(std::abs(a), std::abs(b)), abs_floor);
  };
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (a + b);
}

/// Adaptive Gauss-Kronrod (15 point) integral of f over [a, b]. Infinite
/// limits are accepted.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-13, unsigned max_depth = 30) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, rel_tol);
}

/// Integral over consecutive panels [x_i, x_{i+1}], each handled adaptively.
template <class F>
double integrate_panels(F&& f, const std::vector<double>& x, unsigned max_depth = 12) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (x[i + 1] > x[i]) sum += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, x[i], x[i + 1], max_depth, 1e-13);
  return sum;
}

/// Points geometrically spaced on [lo, hi] (lo > 0), per_decade per factor of ten.
inline std::vector<double> geometric_grid(double lo, double hi, int per_decade) {
  std::vector<double> g;
  const int n = std::max(1, static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade)));
  for (int i = 0; i <= n; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / n));
  g.back() = hi;
  return g;
}

inline double sq(double x) { return x * x; }

}  // namespace bnlab::num
