#pragma once

#include <limits>
#include <vector>

#include "isolab/geodesic_balls.hpp"
#include "isolab/metric.hpp"
#include "isolab/parallel.hpp"

namespace isolab {

struct CurveSample {
  double s = 0.0;      // arclength
  double r = 0.0;      // radial coordinate
  double theta = 0.0;  // fiber polar angle
  double cum_area = 0.0;
  double cum_volume = 0.0;  // flux accumulation (signed)
};

// Axially symmetric surface generated by revolving a curve in the (r, theta)
// half plane, shot from a smooth axis start with prescribed mean curvature.
struct CMCSolution {
  double h = 0.0;
  double r0 = 0.0;
  double theta0 = 0.0;
  std::vector<CurveSample> curve;
  double area = 0.0;
  // Volume of the smaller of the two regions the surface bounds; the raw
  // signed flux is kept alongside (it sees the complement when the region
  // wraps around a pole).
  double enclosed_volume = 0.0;
  double flux_volume = 0.0;
  double closure_residual = std::numeric_limits<double>::infinity();
  bool closed = false;
  int end_axis = -1;    // 0: returned to theta = 0, 1: reached theta = pi
  bool outward = true;  // shooting normal points out of the enclosed region
};

CMCSolution shoot_cmc(const WarpedMetric& metric, double r0, double theta0,
                      double h, double closure_tol = 1e-8,
                      double ode_tol = 1e-12);

CMCSolution find_closed_cmc(const WarpedMetric& metric, double h,
                            double r0_init, double closure_tol = 1e-8);

struct CompetitorRecord {
  double target_volume = 0.0;
  double candidate_area = 0.0;
  int solutions_found = 0;
  int volume_matched = 0;
  double best_area = std::numeric_limits<double>::quiet_NaN();
  double best_volume = std::numeric_limits<double>::quiet_NaN();
  double best_h = std::numeric_limits<double>::quiet_NaN();
  // worst (largest) relative amount by which a matched competitor undercuts
  // the candidate profile at the competitor's own volume
  double max_deficit_rel = 0.0;
  bool beaten = false;
};

struct ComparisonReport {
  std::vector<CompetitorRecord> records;
  bool any_beaten = false;
};

ComparisonReport compare_with_profile(const WarpedMetric& metric,
                                      const ProfileTable& profile,
                                      const std::vector<double>& volumes,
                                      Exec exec = Exec::parallel,
                                      double volume_match_rel = 1e-2,
                                      double flag_rel = 1e-3);

}  // namespace isolab
