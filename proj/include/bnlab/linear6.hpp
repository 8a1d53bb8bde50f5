#pragma once

#include "bnlab/branch.hpp"
#include "bnlab/critical.hpp"

namespace bnlab {

/// Linearization of the N = 6 limit problem at u_bar = -u^{m-1}, so that
/// u_bar(0) = lambda_bar / 2.
struct LinearizedBundle {
  int m = 2;
  double lambda_bar = 0.0;
  RadialProfile u_bar;
  RadialProfile v0_bar;   // -Delta v - (2|u_bar| + lambda_bar) v = u_bar, v(1) = 0
  RadialProfile h;        // homogeneous solution with h(0) = 1
  double v0_bar_at_0 = 0.0;
  double nondegeneracy_margin = 0.0;  // |h(1)| / max |h|
  double sign_selector = 0.0;         // 1 - 2 v0_bar(0) = 1 + 2 v0(0)
};

/// Solves the v0 problem by superposition. Throws Degenerate when the
/// homogeneous solution nearly vanishes at r = 1.
LinearizedBundle solve_v0(const CriticalData& critical, double tol_rel = 1e-12);

/// Same as solve_v0 with the source multiplied by t (linearity probe).
LinearizedBundle solve_v0_scaled_source(const CriticalData& critical, double t, double tol_rel = 1e-12);

struct Z0Data {
  RadialProfile w0;  // (r/2) u_bar' + u_bar
  RadialProfile z0;  // w0 - lambda_bar v0_bar
  double z0_at_0 = 0.0;
  double z0_at_1 = 0.0;
  double boundary_rel_error = 0.0;    // |z0(1) - u_bar'(1)/2| / |u_bar'(1)/2|
  double center_error = 0.0;          // |z0(0) - u_bar(0)(1 - 2 v0_bar(0))|
  double proportionality_error = 0.0; // max |z0 - z0(0) h| / max |z0|
};

Z0Data z0_crosscheck(const LinearizedBundle& bundle, int samples = 2000);

enum class Side { Above, Below };

/// Side from which the branch approaches lambda_bar; Indeterminate when the
/// selector is within 1e-6 of zero.
Side predict_sign(const LinearizedBundle& bundle);
Side predict_sign(double sign_selector);

}  // namespace bnlab
