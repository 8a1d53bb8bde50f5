#pragma once

#include <vector>

#include "bnlab/profile.hpp"

namespace bnlab {

/// Surface measure of the unit sphere S^{N-1}.
double sphere_area(int N);

/// h-th positive zero of J_nu for nu in {1/2, 1, 3/2, 2}.
double bessel_zero(double nu, int h);
double bessel_j(double nu, double x);

/// Radial Dirichlet eigenvalues of the unit ball in R^N.
struct SpectralBasis {
  int N;
  double order;  // N/2 - 1
  std::vector<double> mus;

  static SpectralBasis build(int N, int count);
};

double mu(int N, int h);

/// Radial eigenfunction normalized by psi(0) = -1.
double psi(int N, int h, double r);
double psi_prime(int N, int h, double r);

/// int_0^1 r^w |psi_h|^p dr.
double psi_integral(int N, int h, double p, int w);

/// Green function of -Delta - pi^2/4 on the ball in R^3 with pole at 0.
double green_V(double r);
double green_V_prime(double r);

/// Green function of -Delta on the ball with pole at 0 and its regular part.
double green_G(int N, double r);
double green_G_prime(int N, double r);
inline double green_H(int /*N*/, double /*r*/) { return 1.0; }

/// (int |u'|^2 - lambda int u^2) / (int |u|^{2N/(N-2)})^{(N-2)/N} over the
/// ball of radius profile.r_end(), lambda taken from the profile.
double sobolev_quotient(const RadialProfile& profile);

}  // namespace bnlab
