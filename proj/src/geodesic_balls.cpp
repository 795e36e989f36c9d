#include "isolab/geodesic_balls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "isolab/rootfind.hpp"

namespace isolab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}  // namespace

const char* realizer_name(Realizer r) {
  switch (r) {
    case Realizer::north: return "north";
    case Realizer::south: return "south";
    case Realizer::ode: return "ode";
  }
  return "unknown";
}

SphereGeometry sphere_geometry(const WarpedMetric& metric, double radius,
                               Pole pole) {
  const double L = metric.length();
  if (!(radius > 0.0) || !(radius < L))
    throw Error(errc::out_of_domain, "sphere_geometry: radius must be interior");
  if (pole == Pole::south && !metric.is_closed())
    throw Error(errc::out_of_domain,
                "sphere_geometry: metric with boundary has no south pole");

  const double rc = (pole == Pole::north) ? radius : L - radius;
  FJet j = metric.jet(rc);
  if (pole == Pole::south) j.f1 = -j.f1;  // reflected coordinate

  SphereGeometry g;
  g.r = radius;
  g.pole = pole;
  g.area = 4.0 * kPi * j.f * j.f;
  g.mean_curvature = 2.0 * j.f1 / j.f;
  g.second_form_norm_sq = 0.5 * g.mean_curvature * g.mean_curvature;
  g.normal_ricci_integral = g.area * (-2.0 * j.f2 / j.f);
  return g;
}

double volume_of_ball(const WarpedMetric& metric, double radius, Pole pole) {
  if (pole == Pole::north) return metric.ball_volume(radius);
  if (!metric.is_closed())
    throw Error(errc::out_of_domain,
                "volume_of_ball: metric with boundary has no south pole");
  return metric.total_volume() - metric.ball_volume(metric.length() - radius);
}

double radius_for_volume(const WarpedMetric& metric, double volume, Pole pole) {
  if (pole == Pole::north) return metric.radius_for_volume(volume);
  if (!metric.is_closed())
    throw Error(errc::out_of_domain,
                "radius_for_volume: metric with boundary has no south pole");
  return metric.length() -
         metric.radius_for_volume(metric.total_volume() - volume);
}

CandidateSample candidate_sample(const WarpedMetric& metric, double volume) {
  const double total = metric.total_volume();
  const double rn = metric.radius_for_volume(volume);
  const double fn = metric.f(rn);
  const double an = 4.0 * kPi * fn * fn;

  const double rs_coord = metric.radius_for_volume(total - volume);
  const double fs = metric.f(rs_coord);
  const double as = 4.0 * kPi * fs * fs;

  CandidateSample s;
  s.area_north = an;
  s.area_south = as;
  s.area = std::fmin(an, as);
  const double tie = 1e-9 * std::fmax(1.0, std::fmax(an, as));
  if (as < an - tie) {
    s.pole = Realizer::south;
    s.radius = metric.length() - rs_coord;
  } else {
    s.pole = Realizer::north;
    s.radius = rn;
  }
  return s;
}

double candidate_area(const WarpedMetric& metric, double volume) {
  return candidate_sample(metric, volume).area;
}

double candidate_area_prime(const WarpedMetric& metric, double volume,
                            double step_factor) {
  const double total = metric.total_volume();
  const double base = std::fmin(volume, total - volume);
  const double h = std::fmax(step_factor * base, 1e-8 * total);
  // second-order one-sided quotient; right-sided wherever it fits
  if (volume + 2.0 * h <= total) {
    const double i0 = candidate_area(metric, volume);
    const double i1 = candidate_area(metric, volume + h);
    const double i2 = candidate_area(metric, volume + 2.0 * h);
    return (-3.0 * i0 + 4.0 * i1 - i2) / (2.0 * h);
  }
  const double i0 = candidate_area(metric, volume);
  const double i1 = candidate_area(metric, volume - h);
  const double i2 = candidate_area(metric, volume - 2.0 * h);
  return (3.0 * i0 - 4.0 * i1 + i2) / (2.0 * h);
}

double candidate_area_second(const WarpedMetric& metric, double volume,
                             double step_factor) {
  const double total = metric.total_volume();
  const double base = std::fmin(volume, total - volume);
  if (base <= 0.0)
    throw Error(errc::out_of_range,
                "candidate_area_second: volume must be interior");
  const double h = std::fmax(step_factor * base, 1e-6 * total * step_factor);
  const double im = candidate_area(metric, volume - h);
  const double i0 = candidate_area(metric, volume);
  const double ip = candidate_area(metric, volume + h);
  return (ip - 2.0 * i0 + im) / (h * h);
}

ProfileTable candidate_profile(const WarpedMetric& metric, int grid_size,
                               Exec exec, double prime_step_factor) {
  if (!metric.is_closed())
    throw Error(errc::out_of_domain,
                "candidate_profile: metric must be closed (double it first)");
  if (grid_size < 128)
    throw Error(errc::out_of_range, "candidate_profile: gridSize >= 128 required");

  const double total = metric.total_volume();
  const int n = grid_size;
  const double dv = total / n;

  ProfileTable table;
  table.total_volume = total;
  table.grid_step = dv;
  table.entries.resize(n + 1);

  parallel_for(n + 1, exec, [&](std::int64_t i) {
    const double v = total * double(i) / double(n);
    const CandidateSample s = candidate_sample(metric, v);
    ProfileEntry& e = table.entries[i];
    e.volume = v;
    e.area = s.area;
    e.pole = s.pole;
    e.radius = s.radius;
    e.area_prime = candidate_area_prime(metric, v, prime_step_factor);
  });

  for (int i = 0; i <= n; ++i) {
    ProfileEntry& e = table.entries[i];
    if (i == 0 || i == n) {
      e.area_second = kNan;
      continue;
    }
    e.area_second = (table.entries[i + 1].area - 2.0 * e.area +
                     table.entries[i - 1].area) /
                    (dv * dv);
  }
  for (int i = 0; i <= n; ++i) {
    const Realizer p = table.entries[i].pole;
    const bool prev_switch = i > 0 && table.entries[i - 1].pole != p;
    const bool next_switch = i < n && table.entries[i + 1].pole != p;
    table.entries[i].pole_switch = prev_switch || next_switch;
  }
  return table;
}

double s3_reference_radius(double volume) {
  constexpr double total = 2.0 * kPi * kPi;
  const double eps = 1e-9 * total;
  if (volume < -eps || volume > total + eps)
    throw Error(errc::out_of_range,
                "s3_reference_radius: volume outside [0, 2 pi^2]");
  volume = std::clamp(volume, 0.0, total);
  if (volume == 0.0) return 0.0;
  if (volume == total) return kPi;

  const auto g = [&](double r) {
    return kPi * (2.0 * r - std::sin(2.0 * r)) - volume;
  };
  double r = brent(g, 0.0, kPi, -volume, total - volume, 1e-15 * kPi);
  const double s = std::sin(r);
  const double slope = 4.0 * kPi * s * s;
  if (slope > 1e-12) r -= g(r) / slope;
  return std::clamp(r, 0.0, kPi);
}

double s3_reference_profile(double volume) {
  const double s = std::sin(s3_reference_radius(volume));
  return 4.0 * kPi * s * s;
}

}  // namespace isolab
