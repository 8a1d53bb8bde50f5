#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bnlab/profile.hpp"
#include "bnlab/radial_ivp.hpp"

namespace bnlab {

struct ShootOptions {
  double tol_rel = 1e-10;
  double tol_abs = 1e-10;
  double r_max = 200.0;
};

struct NodalData {
  std::vector<double> zeros;    // interior zeros r_1 < ... < r_{m-1}
  double r_lambda = 0.0;        // first interior zero, 0 when m = 1
  double s_lambda = 0.0;        // first minimum, NaN when m = 1
  std::vector<double> zone_max; // sup |u| on each nodal zone
  double M_annulus = 0.0;       // sup |u| on (r_lambda, 1)
};

struct BranchPoint {
  int N = 3;
  int m = 1;
  double a = 0.0;       // u(0) of the lambda = 1 shot
  double R = 0.0;       // m-th zero of the shot
  double lambda = 0.0;  // R^2
  double eps = 0.0;     // lambda * r_lambda^2
  double sup_norm = 0.0;
  Trajectory shot;
  RadialProfile profile;
  NodalData nodal;
};

/// m-nodal-zone solution on the unit ball from the lambda = 1 shot with u(0) = a.
BranchPoint shoot(int N, int m, double a, const ShootOptions& opt = {});

/// Nodal structure of a shot; throws StructureViolation when zeros and
/// extrema do not interlace or the zone maxima are not decreasing.
NodalData analyze_nodal(const BranchPoint& point);

/// Positive solution v(x) = r_lambda^{(N-2)/2} u(r_lambda x) on the unit ball,
/// solving the problem with parameter eps.
RadialProfile rescale_to_positive(const BranchPoint& point);

/// Right-hand side of the integral representation of u(a) in terms of
/// u'(b) and the nodal radius ri.
double stima_norma(const RadialProfile& u, double a, double b, double ri);

struct BoundsReport {
  bool window = false;      // 0 < lambda r^2 < mu_1, or pi^2/4 < lambda r^2 < pi^2 for N = 3
  bool annulus_bound = false;  // M_annulus <= -r u'(r)/(N-2)
  bool ordering = false;    // zone maxima strictly decreasing
  double identity_residual = 0.0;   // worst flux-form identity residual in units of 10 tol max|u'|
  double dipassaggio_residual = 0.0;  // relative error reproducing u(s_lambda)
  bool ok() const;
};

/// Runs the structural bounds on a branch point (m >= 2). The derivative
/// identity is sampled at `samples` deterministic pseudo-random (r, b) pairs.
BoundsReport check_bounds(const BranchPoint& point, int samples = 8);

struct BranchEntry {
  double a = 0.0;
  std::optional<BranchPoint> point;
  std::string error;  // error name when point is empty
};

struct BranchTable {
  int N = 3;
  int m = 1;
  std::vector<BranchEntry> entries;

  std::vector<const BranchPoint*> points() const;
  void write_csv(std::ostream& os) const;
};

/// Log-spaced grid with per_decade points per decade on [a_min, a_max].
std::vector<double> log_grid(double a_min, double a_max, int per_decade);

/// One branch point per grid value; failures are recorded per entry. Points
/// are computed on up to `jobs` threads, the table order follows the grid.
BranchTable sweep(int N, int m, const std::vector<double>& a_grid, const ShootOptions& opt = {}, int jobs = 1);

}  // namespace bnlab
