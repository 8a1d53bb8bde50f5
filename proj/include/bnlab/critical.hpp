#pragma once

#include <optional>

#include "bnlab/branch.hpp"

namespace bnlab {

struct CriticalData {
  int N = 3;
  int m = 2;
  double lambda_bar = 0.0;
  double r_bar = 0.0;  // limit of the first zero
  /// N = 6: the solution u^{m-1} with u(0) = -lambda_bar/2 and m-1 zones.
  std::optional<RadialProfile> limit_profile;
};

/// Concentration value for m >= 2. For N = 6 the overdetermined problem is
/// solved by one shot at parameter shot_lambda with u(0) = -shot_lambda/2.
CriticalData lambda_bar(int N, int m, const ShootOptions& opt = {}, double shot_lambda = 1.0);

struct OverdeterminedReport {
  double boundary_value = 0.0;   // |u(1)|
  double central_ratio = 0.0;    // u(0)/lambda_bar
  int interior_zeros = 0;        // in (0, 1)
  double perturbed_gap_minus = 0.0;  // R^2 - lambda_bar for central value -(1 - 1e-3)/2
  double perturbed_gap_plus = 0.0;   // same with -(1 + 1e-3)/2
  bool ok(int m) const;
};

OverdeterminedReport verify_overdetermined(const CriticalData& data, const ShootOptions& opt = {});

}  // namespace bnlab
