#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bnlab/branch.hpp"
#include "bnlab/config.hpp"
#include "bnlab/critical.hpp"
#include "bnlab/linear6.hpp"

namespace bnlab {

/// Fit models on x = |lambda - lambda_bar|:
///   Power:            q = C x^p
///   PowerWithLog:     q = C x^p |log x|
///   LogInverseSquare: q = C |log x|^p
enum class FitModel { Power, PowerWithLog, LogInverseSquare };

struct FitResult {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  double window_lo = 0.0;  // range of |lambda - lambda_bar| used
  double window_hi = 0.0;
  int n_points = 0;
};

/// Least squares in the transformed coordinates. Needs at least 8 points
/// spanning 1.5 decades in x, else InsufficientTail.
FitResult fit_rate(const std::vector<double>& x, const std::vector<double>& q, FitModel model);

/// Prefactor with the exponent held at p: mean of log(q / model) over the
/// decade of smallest x.
double pinned_prefactor(const std::vector<double>& x, const std::vector<double>& q, FitModel model, double p);

using Quantity = std::function<double(const BranchPoint&)>;

/// Named branch quantity: sup_norm, r_lambda, s_lambda, M_annulus, eps,
/// lambda, u_prime_r (u' at r_lambda). UnknownName otherwise.
Quantity quantity(std::string_view name);

/// Points of the table with |lambda - lambda_bar| / lambda_bar in
/// [window_lo, window_hi], ordered by decreasing |lambda - lambda_bar|.
std::vector<const BranchPoint*> tail_points(const BranchTable& table, double lambda_bar, double window_lo,
                                            double window_hi);

FitResult fit_rate(const BranchTable& table, const Quantity& q, double lambda_bar, FitModel model,
                   double window_lo = 1e-3, double window_hi = 1e-1);

struct TheoremAux {
  double lambda_bar = 0.0;     // required for the N = 6 constants
  double sign_selector = 0.0;  // 1 + 2 v0(0), N = 6
};

/// Closed-form constants of the blow-up laws. The names are listed in the
/// README; UnknownName for anything else, DomainError when a constant does
/// not exist in dimension N.
double theorem_constant(std::string_view name, int N, int m, const TheoremAux& aux = {});

/// Root of 1 + theta tan(theta) in (pi/2, 3 pi/2).
double theta_o();

enum class Region { FirstZone, Annulus };

struct LimitProfile {
  int N = 3;
  int m = 2;
  double r_bar = 0.0;  // limit of r_lambda (0 for N >= 4)
  double s_bar = 0.0;  // N = 3: minimum of w
  /// Limit of the normalized solution on the given region.
  std::function<double(double)> first_zone;
  std::function<double(double)> annulus;
};

LimitProfile limit_profile(int N, int m, const CriticalData& critical);

/// sup over [max(r_min, region start), region end] of the distance between
/// the normalized solution and its limit, on 400 uniform samples.
/// N = 3 first zone divides by sqrt(lambda - lambda_bar), annuli divide by
/// M_lambda, N = 6 is not normalized. For N >= 4 the region is [r_min, 1].
double compare_profile(const BranchPoint& point, const LimitProfile& limit, Region region, double lambda_bar,
                       double r_min = 0.05);

struct ReportRow {
  std::string theorem;
  std::string display_id;
  double predicted = 0.0;
  double fitted = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// "check" rows gate the report, "derived" rows compare against the
  /// independently derived constants, "info" rows report without gating and
  /// "conditional" rows depend on nondegeneracy (N = 6, m >= 3).
  std::string kind = "check";
  double margin = 0.0;
};

struct VerifyAux {
  CriticalData critical;
  std::optional<LinearizedBundle> linear;  // required for N = 6
  Config config = default_config();
};

struct VerifyReport {
  int N = 3;
  int m = 2;
  double lambda_bar = 0.0;
  int tail_size = 0;
  std::vector<ReportRow> rows;

  /// Row by display id, optionally restricted to one theorem; UnknownName
  /// when absent.
  const ReportRow& row(std::string_view display_id, std::string_view theorem = {}) const;
  bool all_pass() const;  // over "check" rows
  nlohmann::json to_json() const;
};

/// Every blow-up comparison for dimension N on the sweep `table`.
VerifyReport verify_theorem(int N, int m, const BranchTable& table, const VerifyAux& aux);

/// Sweep on the configured tail grid of dimension N.
BranchTable tail_sweep(int N, int m, const Config& config);

}  // namespace bnlab
