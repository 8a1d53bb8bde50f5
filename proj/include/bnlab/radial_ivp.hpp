#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "bnlab/dop853.hpp"

namespace bnlab {

/// Critical nonlinearity f(u) = |u|^{4/(N-2)} u and its derivative.
double critical_f(int N, double u);
double critical_df(int N, double u);
/// Exponent 2* - 2 = 4/(N-2).
double critical_power(int N);

struct IvpSpec {
  int N = 3;
  double lambda = 1.0;
  double a = 1.0;
  double r_max = 100.0;
  double tol_rel = 1e-10;
  double tol_abs = 1e-10;

  void validate() const;
};

/// When to end the integration: after `zeros` sign changes of u (0 means
/// never) or at r_max.
struct StopRule {
  int zeros = 0;
  bool require_zeros = true;  // TooFewZeros if r_max comes first
};

struct CritPoint {
  double r;
  double u;
};

/// Integrated radial solution with its dense output. Cheap to copy.
///
/// The integrator carries v = u - B, where B is the exact solution of the
/// lambda = 0 equation with B(0) = a. For concentrated solutions the core is
/// then represented exactly and the small lambda-driven part, which decides
/// where the zeros fall, keeps full relative accuracy.
class Trajectory {
 public:
  const IvpSpec& spec() const { return spec_; }
  double r_start() const { return r_start_; }
  double r_end() const;

  /// (u, u') at r in [0, r_end]; the Taylor expansion is used below r_start.
  ode::State<2> eval(double r) const;
  double u(double r) const { return eval(r)[0]; }
  double u_prime(double r) const { return eval(r)[1]; }

  const std::vector<double>& zeros() const { return zeros_; }
  const std::vector<CritPoint>& crits() const { return crits_; }

  /// Accepted step boundaries including r_start.
  std::vector<double> nodes() const;
  /// Largest |u'| over the step boundaries.
  double max_abs_u_prime() const;
  /// Largest |u| over [lo, hi] sampled on step boundaries and crits.
  double max_abs_u(double lo, double hi) const;

  void write_csv(std::ostream& os) const;

  /// The subtracted profile (B, B').
  ode::State<2> bubble(double r) const;

 private:
  friend Trajectory integrate(const IvpSpec&, const StopRule&);
  IvpSpec spec_;
  double r_start_ = 0.0;
  double taylor_b_ = 0.0, taylor_k_ = 0.0;
  double bubble_s_ = 0.0;  // B = a (1 + s r^2)^{-(N-2)/2}
  std::shared_ptr<const std::vector<ode::DenseStep<2>>> steps_;
  std::vector<double> zeros_;
  std::vector<CritPoint> crits_;
};

/// Start radius at which the r^4 Taylor term of u drops below tol_abs.
double taylor_start_radius(const IvpSpec& spec);

Trajectory integrate(const IvpSpec& spec, const StopRule& stop);

/// u'(r) - r^{1-N}[b^{N-1}u'(b) + int_r^b s^{N-1}(f(u)+lambda u) ds].
double check_integral_identity(const Trajectory& traj, double r, double b);

/// Checks that every pair of consecutive zeros encloses exactly one critical
/// point; throws StructureViolation otherwise.
void assert_interlacing(const Trajectory& traj);

}  // namespace bnlab
