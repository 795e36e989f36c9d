#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "isolab/geodesic_balls.hpp"
#include "isolab/metric.hpp"
#include "isolab/parallel.hpp"

namespace isolab {

// m_H = sqrt(I) (16 pi - 4 I - I I'^2)
double hawking_mass(double area, double area_prime);

struct HawkingEntry {
  double volume = 0.0;
  double mass = 0.0;
  double mass_prime = 0.0;  // forward difference quotient on the grid
};

struct HawkingTable {
  std::vector<HawkingEntry> entries;
  double total_volume = 0.0;
  bool monotone_on_first_half = false;
  double min_derivative = 0.0;
  double limit_at_zero = 0.0;  // linear extrapolation from the three smallest-V nodes
};

HawkingTable hawking_table(const ProfileTable& profile);

struct MonotonicityVerdict {
  bool monotone = false;
  double min_derivative = 0.0;
  std::size_t worst_index = 0;
  double worst_volume = 0.0;
  double tolerance = 0.0;
};

// Nondecreasing on (0, total/2) up to a tolerance tied to the mass scale.
MonotonicityVerdict check_monotonicity(const HawkingTable& table,
                                       double total_volume,
                                       double tol_factor = 1e-6);

// dI/dV = sqrt((16 pi - 4 I)/I), valid for 0 < I <= 4 pi.
double rigidity_ode_rhs(double area);

// Integrates the rigidity ODE from (v0, i0) up to v_max or until I reaches
// 4 pi. When i0 is not given the solution is seeded on the S^3 profile.
ProfileTable integrate_rigidity_ode(double v0, std::optional<double> i0,
                                    double v_max, double tol = 1e-10,
                                    int checkpoints = 512);

struct InequalityRow {
  double r = 0.0;
  double volume = 0.0;
  double area = 0.0;
  double mean_curvature = 0.0;
  double area_prime = 0.0;
  double area_second = 0.0;
  double basic_lhs = 0.0;      // I'' I^2 + Int (Ric(nu,nu) + |A|^2)
  double refined_bound = 0.0;  // 4 pi/I^2 - 3 I'^2/(4 I) - Int R/(2 I^2)
  double cy_rhs = 0.0;         // Int H^2 + (2/3) Int R
  double cy_slack = 0.0;       // 16 pi - cy_rhs
  double refined_slack = 0.0;  // refined_bound - I''
};

struct InequalityLedger {
  std::vector<InequalityRow> rows;
};

InequalityLedger inequality_ledger(const WarpedMetric& metric,
                                   const std::vector<double>& radii,
                                   Exec exec = Exec::parallel,
                                   int hypothesis_grid = 512,
                                   double prime_step_factor = 1e-4,
                                   double second_step_factor = 1e-2);

struct MaxAreaReport {
  double max_area = 0.0;
  bool rigid = false;
  std::size_t argmax_index = 0;
  // sup |I - I_S3| over grid nodes with V <= 2 pi^2, in area units
  double max_abs_deviation_from_s3 = 0.0;
  double tol_rigid = 0.0;
};

MaxAreaReport max_isoperimetric_area(const ProfileTable& profile,
                                     double tol_rigid_rel = 1e-4);

}  // namespace isolab
