#pragma once

#include <array>
#include <vector>

#include "isolab/geodesic_balls.hpp"
#include "isolab/metric.hpp"
#include "isolab/parallel.hpp"

namespace isolab {

struct FitSample {
  double r = 0.0;
  double volume = 0.0;
  double y = 0.0;  // vol/((4 pi/3) r^3) - 1
  double weight = 0.0;
};

// Geodesic-ball volume expansion data at a pole:
//   vol(B(p,r)) = (4 pi/3) r^3 (1 + c1 r^2 + c2 r^4 + O(r^6))
// with c1 = -R/30 and c2 = (4 R^2 - 2|Ric|^2 - 9 dR)/6300.
struct ExpansionReport {
  Pole pole = Pole::north;
  double c1_analytic = 0.0;
  double c2_analytic = 0.0;
  double ric_norm_sq = 0.0;        // |Ric(p)|^2
  double laplacian_scalar = 0.0;   // (Delta R)(p)
  double area_coefficient6 = 0.0;  // -(11/9) c1^2 + (5/3) c2
  double c1_fitted = 0.0;
  double c2_fitted = 0.0;
  double fit_residual_rms = 0.0;
  double fit_residual_max = 0.0;
  double fit_condition = 0.0;
  double window_min = 0.0;
  double window_max = 0.0;
  bool fitted = false;
  std::vector<FitSample> samples;
};

ExpansionReport analytic_coefficients(const WarpedMetric& metric, Pole pole);

// Weighted least squares of y(r) against (r^2, r^4) on [r_min, r_max],
// weights r^-6 to keep the O(r^6) tail from biasing the fit.
ExpansionReport fit_coefficients(const WarpedMetric& metric, Pole pole,
                                 double r_min, double r_max, int sample_count,
                                 Exec exec = Exec::parallel);

// Truncated sphere-area expansion 4 pi W^2 (1 + c1 W^2 + c6 W^4) with
// c6 = -(11/9) c1^2 + (5/3) c2 and W = (3V/(4 pi))^{1/3}.
double area_expansion(double c1, double c2, double w);
double area_expansion_order6_coefficient(double c1, double c2);

enum class ProfileSource { candidate, s3_reference };

struct ScalarBoundReport {
  Pole pole = Pole::north;
  double scalar_at_pole = 0.0;
  double slack = 0.0;  // |R(p) - 6|
  double implied_c1_lower = 0.0;
  bool confirmed = false;
  // per-W records: {W, expansion area, reference area}
  std::vector<std::array<double, 3>> sequence;
};

// Replicates the proof-step comparison of small-ball areas against the S^3
// profile on the rigidity branch, pinning R(p) = 6.
ScalarBoundReport scalar_bound_check(const WarpedMetric& metric, Pole pole,
                                     ProfileSource source,
                                     const ProfileTable* profile = nullptr,
                                     double tol_rigid_rel = 1e-4);

struct RicciBoundReport {
  Pole pole = Pole::north;
  double ric_norm_sq = 0.0;
  double coefficient_identity_residual = 0.0;
  double slack = 0.0;  // |q - 12|
  bool bound_ok = false;
  bool einstein = false;
};

RicciBoundReport ricci_bound_check(const WarpedMetric& metric, Pole pole);

}  // namespace isolab
