#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "bnlab/dop853.hpp"

namespace bnlab {

class Trajectory;

/// A radial function on [0, r_end] with its derivative. The knots are radii
/// where the evaluator changes piece (integrator steps, zeros); quadrature
/// splits its panels there.
class RadialProfile {
 public:
  using Eval = std::function<ode::State<2>(double)>;

  RadialProfile() = default;
  RadialProfile(int N, double lambda, double r_end, Eval eval, std::vector<double> knots = {});

  /// v(r) = amp * u(scale * r) restricted to [0, r_end].
  static RadialProfile from_trajectory(const Trajectory& traj, double scale, double amp, double lambda,
                                       double r_end);

  int N() const { return N_; }
  double lambda() const { return lambda_; }
  double r_end() const { return r_end_; }
  const std::vector<double>& knots() const { return knots_; }

  ode::State<2> eval(double r) const { return eval_(r); }
  double u(double r) const { return eval_(r)[0]; }
  double u_prime(double r) const { return eval_(r)[1]; }

  /// Same profile multiplied by c.
  RadialProfile scaled(double c) const;

  /// Integral of g(r, u, u') r^{N-1} dr over [lo, hi], panels split at knots.
  double integrate(const std::function<double(double, double, double)>& g, double lo, double hi) const;

  /// Uniform samples, written as CSV r,u,u_prime with 17 digits.
  void write_csv(std::ostream& os, int samples) const;

 private:
  int N_ = 3;
  double lambda_ = 0.0;
  double r_end_ = 1.0;
  Eval eval_;
  std::vector<double> knots_;
};

}  // namespace bnlab
