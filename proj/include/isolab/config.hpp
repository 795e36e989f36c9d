#pragma once

#include <string>

#include <json.hpp>

#include "isolab/metric.hpp"

namespace isolab {

// Named tolerances of the laboratory; a config document may override any
// subset by key. All values must stay positive.
struct Tolerances {
  double hypothesis_slack = 1e-9;        // R >= 6 - slack
  double pole_window_factor = 1e-3;      // series window delta0 / L
  double seam_notch_factor = 1e-2;       // hypothesis notch around the seam
  double quad_rel = 1e-13;               // quadrature calibration target
  double root_xtol_factor = 1e-10;       // radius inversion bracket tolerance
  double prime_step_factor = 1e-4;       // I' difference-quotient step
  double second_step_factor = 1e-2;      // I'' difference-quotient step
  double mono_factor = 1e-6;             // monotonicity tolerance factor
  double rigid_rel = 1e-4;               // rigidity margin, times 4 pi
  double ode_tol = 1e-10;                // rigidity ODE local tolerance
  double closure_tol = 1e-8;             // CMC closure residual
  double cmc_volume_match_rel = 1e-2;    // competitor volume window
  double competitor_flag_rel = 1e-3;     // profile-beating threshold
  double geodesic_boundary_tol = 1e-10;  // |f'(L)| for doubling
};

struct GridConfig {
  int profile_size = 512;    // >= 128
  int curvature_size = 512;  // >= 64
};

struct FitWindowConfig {
  double r_min_factor = 0.02;  // times L
  double r_max_factor = 0.25;  // times L, <= 0.3
  int samples = 48;            // >= 20
};

struct RunConfig {
  WarpingSpec metric;
  GridConfig grid;
  Tolerances tolerances;
  FitWindowConfig fit_window;
  std::string output_dir = "out";
};

nlohmann::json spec_to_json(const WarpingSpec& spec);
WarpingSpec spec_from_json(const nlohmann::json& j);

nlohmann::json tolerances_to_json(const Tolerances& t);
void apply_tolerance_overrides(Tolerances& t, const nlohmann::json& overrides);

RunConfig parse_config(const nlohmann::json& doc);
nlohmann::json config_to_json(const RunConfig& config);
RunConfig load_config_file(const std::string& path);

}  // namespace isolab
