#pragma once

#include <vector>

#include "bnlab/linear6.hpp"

namespace bnlab {

inline constexpr double kAlpha6 = 24.0;
double sigma6();  // pi^3

/// Aubin-Talenti bubble in R^6: U(r) = 24 delta^2 / (delta^2 + r^2)^2.
struct Bubble {
  double delta;

  explicit Bubble(double delta);
  double u(double r) const;
  double u_prime(double r) const;
  double u_second(double r) const;
  /// Derivative in delta: 48 delta (r^2 - delta^2) / (delta^2 + r^2)^3.
  double z(double r) const;
};

/// Projection onto H^1_0 of the unit ball: -Delta PU = U^2, PU(1) = 0.
/// Since the correction is radial and harmonic it is the constant U(1).
struct ProjectedBubble {
  Bubble bubble;

  explicit ProjectedBubble(double delta) : bubble(delta) {}
  double pu(double r) const { return bubble.u(r) - bubble.u(1.0); }
  double pu_prime(double r) const { return bubble.u_prime(r); }
  double pz(double r) const { return bubble.z(r) - bubble.z(1.0); }
  /// PU from the double integral of the radial Poisson problem, computed by
  /// quadrature only.
  double pu_by_quadrature(double r) const;
};

ProjectedBubble project_bubble(double delta);

/// Radius where U_delta equals level (first crossing from the center).
double bubble_level_radius(double delta, double level);

struct AnsatzBundle {
  double eps = 0.0;
  double d = 0.0;
  double delta = 0.0;
  double lambda_bar = 0.0;
  LinearizedBundle lin;
  ProjectedBubble pu{0.1};
  RadialProfile W;                 // u_bar + eps v0_bar - PU
  std::vector<double> panels;      // quadrature breakpoints on [0, 1]

  /// u_bar + eps v0_bar.
  double background(double r) const;
};

/// Assembles W on a grid clustered at the scales delta and sqrt(delta).
AnsatzBundle build_ansatz(const LinearizedBundle& lin, double eps, double d, int per_decade = 200);

/// Pointwise residual -Delta W - |W|W - (lambda_bar + eps)W, obtained from
/// the equations solved by the three pieces.
double residual(const AnsatzBundle& b, double r);
/// L^{3/2}(B) norm of the residual.
double residual_norm(const AnsatzBundle& b);

/// sigma_6 int (|u'|^2/2 - lambda u^2/2 - |u|^3/3) r^5 dr.
double energy(const RadialProfile& u, double lambda);
double energy(const AnsatzBundle& b);

/// J(W) - J(u_bar + eps v0_bar) - (1/6) int_{R^6} U^3, evaluated without the
/// large cancelling pieces.
double energy_d_part(const AnsatzBundle& b);

struct ReducedEnergy {
  double a1 = 0.0;
  double a2 = 0.0;
  double selector = 0.0;
  double sgn_eps = 1.0;

  static ReducedEnergy build(const LinearizedBundle& lin, double eps);
  double upsilon(double d) const;
  /// Critical point 2 a1 / (3 a2) * sgn(eps) * selector (NaN if not positive).
  double d0() const;
};

/// (8 sqrt 3 / 11) |selector| / lambda_bar^{3/2}.
double d0_closed_form(const LinearizedBundle& lin);

/// alpha_6^2 int_{R^6} (1 + |y|^2)^{-4} dy by quadrature.
double a1_by_quadrature();

struct ReducedEnergyRow {
  double d = 0.0;
  double J = 0.0;       // J(W_delta(d))
  double E = 0.0;       // [J(W(d)) - J(W(d_ref))] / |eps|^3
  double dUpsilon = 0.0;  // Upsilon(d) - Upsilon(d_ref)
  double rel_error = 0.0;
  double residual_norm = 0.0;
};

struct ReducedEnergyReport {
  double eps = 0.0;
  double d0 = 0.0;
  double d_ref = 0.0;
  double d_extremum = 0.0;  // maximizer of E over the grid (parabolic refinement)
  double max_rel_error = 0.0;
  std::vector<ReducedEnergyRow> rows;
};

/// Compares energy differences in d with the reduced energy. d_ref <= 0
/// selects d0.
ReducedEnergyReport reduced_energy_check(const LinearizedBundle& lin, double eps, const std::vector<double>& d_grid,
                                         double d_ref = 0.0, bool with_residual = false);

}  // namespace bnlab
