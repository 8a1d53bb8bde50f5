#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "bnlab/branch.hpp"

namespace bnlab {

/// Branch sweep used for the asymptotic fits of one dimension. The window
/// bounds |lambda - lambda_bar| / lambda_bar.
struct TailConfig {
  double a_min = 1e2;
  double a_max = 1e6;
  int per_decade = 10;
  double tol = 1e-13;
  double window_lo = 1e-3;
  double window_hi = 1e-1;
};

struct ReportTolerances {
  double prefactor = 0.10;
  double prefactor_n3 = 0.05;
  double prefactor_n6 = 0.15;
  double exponent_n3 = 0.03;
  double exponent_n5 = 0.10;
  double r_exponent = 0.05;
  double exponent_n6 = 0.10;
  double trend_drift = 0.10;
  double lambda_bar_rel = 1e-4;
  double anchor = 2e-2;
  double min_margin = 1e-3;
  double energy_match = 0.2;
  double residual_exponent = 1.8;
};

struct AnsatzConfig {
  double eps = 1e-3;
  std::vector<double> eps_grid{1e-1, 1e-2, 1e-3};
  int per_decade = 200;
  double d_lo = 0.5;  // in units of d0
  double d_hi = 1.5;
  int d_points = 11;
};

struct Config {
  ShootOptions solver;
  double grid_a_min = 1e-2;
  double grid_a_max = 1e6;
  int grid_per_decade = 40;
  std::array<TailConfig, 4> tail;  // N = 3..6
  ReportTolerances tolerances;
  AnsatzConfig ansatz;
  double linear_tol = 1e-12;
  int jobs = 1;

  const TailConfig& tail_for(int N) const;
};

Config default_config();

/// Overlays the keys of j on the defaults; unknown keys and wrong types
/// raise ConfigError.
Config config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const Config& c);

/// Loads the file named by BN_CONFIG when set, else path, else the defaults.
Config load_config(const std::string& path = {});

}  // namespace bnlab
