#include "bnlab/spectral.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "bnlab/errors.hpp"
#include "bnlab/numerics.hpp"

namespace bnlab {

namespace {

using std::numbers::pi;

void check_dim(int N) {
  if (N < 3 || N > 6) fail(ErrorKind::InvalidArgument, "N must be in {3,4,5,6}");
}

// phi_nu(x) = Gamma(nu+1) (2/x)^nu J_nu(x), so phi_nu(0) = 1.
double phi(double nu, double x) {
  if (std::abs(x) < 0.5) {
    const double q = -0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 20; ++k) {
      term *= q / (k * (nu + k));
      sum += term;
    }
    return sum;
  }
  return boost::math::tgamma(nu + 1) * std::pow(2.0 / x, nu) * boost::math::cyl_bessel_j(nu, x);
}

}  // namespace

double sphere_area(int N) { return 2.0 * std::pow(pi, 0.5 * N) / boost::math::tgamma(0.5 * N); }

double bessel_j(double nu, double x) { return boost::math::cyl_bessel_j(nu, x); }

double bessel_zero(double nu, int h) {
  if (h < 1) fail(ErrorKind::InvalidArgument, "zero index must be >= 1");
  if (nu == 0.5) return h * pi;
  if (nu != 1.0 && nu != 1.5 && nu != 2.0) fail(ErrorKind::UnsupportedOrder, "order must be 1/2, 1, 3/2 or 2");
  return boost::math::cyl_bessel_j_zero(nu, h);
}

SpectralBasis SpectralBasis::build(int N, int count) {
  check_dim(N);
  SpectralBasis b{N, 0.5 * N - 1.0, {}};
  for (int h = 1; h <= count; ++h) b.mus.push_back(mu(N, h));
  return b;
}

double mu(int N, int h) {
  check_dim(N);
  return num::sq(bessel_zero(0.5 * N - 1.0, h));
}

double psi(int N, int h, double r) {
  check_dim(N);
  const double nu = 0.5 * N - 1.0;
  if (r == 1.0) return 0.0;
  return -phi(nu, bessel_zero(nu, h) * r);
}

double psi_prime(int N, int h, double r) {
  check_dim(N);
  const double nu = 0.5 * N - 1.0;
  const double j = bessel_zero(nu, h);
  const double x = j * r;
  return j * x / (2.0 * (nu + 1.0)) * phi(nu + 1.0, x);
}

double psi_integral(int N, int h, double p, int w) {
  check_dim(N);
  if (p == 0.0) return 1.0 / (w + 1);
  const double nu = 0.5 * N - 1.0;
  const double jh = bessel_zero(nu, h);
  std::vector<double> panels{0.0};
  for (int k = 1; k < h; ++k) panels.push_back(bessel_zero(nu, k) / jh);
  panels.push_back(1.0);
  auto f = [&](double r) { return std::pow(r, w) * std::pow(std::abs(psi(N, h, r)), p); };
  return num::integrate_panels(f, panels, 20);
}

double green_V(double r) {
  if (!(r > 0) || r > 1) fail(ErrorKind::DomainError, "green_V needs 0 < r <= 1");
  if (r == 1.0) return 0.0;
  return std::cos(0.5 * pi * r) / (4 * pi * r);
}

double green_V_prime(double r) {
  if (!(r > 0) || r > 1) fail(ErrorKind::DomainError, "green_V_prime needs 0 < r <= 1");
  return -(0.5 * pi * r * std::sin(0.5 * pi * r) + std::cos(0.5 * pi * r)) / (4 * pi * r * r);
}

double green_G(int N, double r) {
  check_dim(N);
  if (!(r > 0) || r > 1) fail(ErrorKind::DomainError, "green_G needs 0 < r <= 1");
  return (std::pow(r, 2 - N) - 1.0) / ((N - 2) * sphere_area(N));
}

double green_G_prime(int N, double r) {
  check_dim(N);
  if (!(r > 0) || r > 1) fail(ErrorKind::DomainError, "green_G_prime needs 0 < r <= 1");
  return -std::pow(r, 1 - N) / sphere_area(N);
}

double sobolev_quotient(const RadialProfile& profile) {
  const int N = profile.N();
  check_dim(N);
  const double lam = profile.lambda();
  const double crit = 2.0 * N / (N - 2);
  const double R = profile.r_end();
  const double num = profile.integrate([lam](double, double u, double up) { return up * up - lam * u * u; }, 0.0, R);
  const double den = profile.integrate([crit](double, double u, double) { return std::pow(std::abs(u), crit); }, 0.0, R);
  const double s = sphere_area(N);
  if (!(s * den > 1e-30)) fail(ErrorKind::DegenerateProfile, "denominator of the Sobolev quotient vanishes");
  return s * num / std::pow(s * den, (N - 2.0) / N);
}

}  // namespace bnlab
