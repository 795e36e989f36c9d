#pragma once

#include <vector>

#include "isolab/metric.hpp"
#include "isolab/parallel.hpp"

namespace isolab {

// Coordinate spheres are totally umbilic: |A|^2 = H^2/2 exactly.
struct SphereGeometry {
  double r = 0.0;  // geodesic radius about the pole
  Pole pole = Pole::north;
  double area = 0.0;
  double mean_curvature = 0.0;         // outward from the enclosed ball
  double second_form_norm_sq = 0.0;    // |A|^2
  double normal_ricci_integral = 0.0;  // Int_Sigma Ric(nu, nu)
};

SphereGeometry sphere_geometry(const WarpedMetric& metric, double radius,
                               Pole pole);

double volume_of_ball(const WarpedMetric& metric, double radius, Pole pole);
double radius_for_volume(const WarpedMetric& metric, double volume, Pole pole);

enum class Realizer { north, south, ode };
const char* realizer_name(Realizer r);

struct ProfileEntry {
  double volume = 0.0;
  double area = 0.0;         // I(V)
  double area_prime = 0.0;   // right difference quotient (I'^+ convention)
  double area_second = 0.0;  // central second difference on the V grid
  Realizer pole = Realizer::north;
  double radius = 0.0;  // ball radius about the realizing pole
  bool pole_switch = false;
};

struct ProfileTable {
  std::vector<ProfileEntry> entries;
  double total_volume = 0.0;
  double grid_step = 0.0;
};

// Candidate isoperimetric area at one volume: the smaller coordinate-sphere
// area enclosing V about either pole. Ties resolve to north.
struct CandidateSample {
  double area = 0.0;
  double area_north = 0.0;
  double area_south = 0.0;
  Realizer pole = Realizer::north;
  double radius = 0.0;
};
CandidateSample candidate_sample(const WarpedMetric& metric, double volume);
double candidate_area(const WarpedMetric& metric, double volume);

// One-sided and central difference quotients of the candidate area in V.
// The step is proportional to the distance from the volume range ends,
// which keeps the quotients accurate where I(V) degenerates at the poles.
double candidate_area_prime(const WarpedMetric& metric, double volume,
                            double step_factor = 1e-4);
double candidate_area_second(const WarpedMetric& metric, double volume,
                             double step_factor = 1e-2);

ProfileTable candidate_profile(const WarpedMetric& metric, int grid_size,
                               Exec exec = Exec::parallel,
                               double prime_step_factor = 1e-4);

// Closed-form profile of the unit round sphere: I(V) = 4 pi sin^2 r with
// pi (2r - sin 2r) = V on [0, 2 pi^2].
double s3_reference_profile(double volume);
double s3_reference_radius(double volume);

}  // namespace isolab
