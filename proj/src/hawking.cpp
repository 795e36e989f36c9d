#include "isolab/hawking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "isolab/ode.hpp"

namespace isolab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
// natural size of m_H on the unit-sphere normalization; the coefficient in
// the scaled-sphere closed form 32 pi^{3/2} u^{3/2} (1 - 1/lambda^2)/lambda
const double kMassScale = 32.0 * kPi * std::sqrt(kPi);
}  // namespace

double hawking_mass(double area, double area_prime) {
  if (area < 0.0)
    throw Error(errc::negative_area, "hawking_mass: negative area");
  if (area == 0.0) return 0.0;
  return std::sqrt(area) *
         (16.0 * kPi - 4.0 * area - area * area_prime * area_prime);
}

HawkingTable hawking_table(const ProfileTable& profile) {
  const std::size_t n = profile.entries.size();
  HawkingTable table;
  table.total_volume = profile.total_volume;
  table.entries.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ProfileEntry& e = profile.entries[i];
    table.entries[i].volume = e.volume;
    table.entries[i].mass = hawking_mass(e.area, e.area_prime);
  }
  for (std::size_t i = 0; i < n; ++i) {
    // the paper's difference quotient operator with delta = grid step
    const std::size_t j = (i + 1 < n) ? i : i - 1;
    const HawkingEntry& lo = table.entries[j];
    const HawkingEntry& hi = table.entries[j + 1];
    table.entries[i].mass_prime = (hi.mass - lo.mass) / (hi.volume - lo.volume);
  }

  if (n >= 3) {
    // least-squares line through the three smallest-V nodes, value at V = 0
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double x = table.entries[i].volume;
      const double y = table.entries[i].mass;
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double det = 3.0 * sxx - sx * sx;
    const double slope = (3.0 * sxy - sx * sy) / det;
    table.limit_at_zero = (sy - slope * sx) / 3.0;
  }

  const MonotonicityVerdict v = check_monotonicity(table, table.total_volume);
  table.monotone_on_first_half = v.monotone;
  table.min_derivative = v.min_derivative;
  return table;
}

MonotonicityVerdict check_monotonicity(const HawkingTable& table,
                                       double total_volume, double tol_factor) {
  if (table.entries.empty() ||
      table.entries.back().volume < 0.5 * total_volume * (1.0 - 1e-12))
    throw Error(errc::out_of_range,
                "check_monotonicity: table must cover (0, totalVolume/2]");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const HawkingEntry& e : table.entries) {
    lo = std::fmin(lo, e.mass);
    hi = std::fmax(hi, e.mass);
  }

  MonotonicityVerdict v;
  v.tolerance = tol_factor * std::fmax(hi - lo, kMassScale);
  v.min_derivative = std::numeric_limits<double>::infinity();
  const double half = 0.5 * total_volume;
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    const HawkingEntry& e = table.entries[i];
    if (!(e.volume < half)) break;
    if (e.mass_prime < v.min_derivative) {
      v.min_derivative = e.mass_prime;
      v.worst_index = i;
      v.worst_volume = e.volume;
    }
  }
  v.monotone = v.min_derivative >= -v.tolerance;
  return v;
}

double rigidity_ode_rhs(double area) {
  if (!(area > 0.0))
    throw Error(errc::out_of_range, "rigidity_ode_rhs: area must be positive");
  if (area > 4.0 * kPi + 1e-12)
    throw Error(errc::out_of_range, "rigidity_ode_rhs: area exceeds 4 pi");
  return std::sqrt(std::fmax(0.0, 16.0 * kPi - 4.0 * area) / area);
}

ProfileTable integrate_rigidity_ode(double v0, std::optional<double> i0,
                                    double v_max, double tol, int checkpoints) {
  if (!(v0 > 0.0) || !(v_max > v0))
    throw Error(errc::out_of_range,
                "integrate_rigidity_ode: need 0 < V0 < Vmax");
  double area0 = i0 ? *i0 : s3_reference_profile(v0);
  if (!(area0 > 0.0) || area0 > 4.0 * kPi + 1e-12)
    throw Error(errc::out_of_range,
                "integrate_rigidity_ode: seed area outside (0, 4 pi]");

  ProfileTable table;
  table.total_volume = v_max;
  table.grid_step = (v_max - v0) / checkpoints;

  const auto push = [&](double v, double area) {
    ProfileEntry e;
    e.volume = v;
    e.area = area;
    e.area_prime =
        (area >= 4.0 * kPi) ? 0.0 : rigidity_ode_rhs(std::fmax(area, 1e-300));
    e.area_second = kNan;
    e.pole = Realizer::ode;
    e.radius = kNan;
    table.entries.push_back(e);
  };

  push(v0, area0);
  const double stop = 4.0 * kPi * (1.0 - 1e-12);
  if (area0 >= stop) return table;  // rhs = 0 boundary: constant, done

  const auto rhs = [](double, const std::array<double, 1>& y) {
    std::array<double, 1> d;
    const double a = std::fmax(y[0], 1e-300);
    d[0] = std::sqrt(std::fmax(0.0, 16.0 * kPi - 4.0 * a) / a);
    return d;
  };

  std::array<double, 1> y = {area0};
  for (int j = 1; j <= checkpoints; ++j) {
    const double target = v0 + (v_max - v0) * double(j) / checkpoints;
    integrate_adaptive<1>(rhs, y, table.entries.back().volume, target, tol,
                          [](double, const std::array<double, 1>&) {});
    push(target, y[0]);
    if (y[0] >= stop) break;
  }

  const std::size_t n = table.entries.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const ProfileEntry& lo = table.entries[i - 1];
    const ProfileEntry& hi = table.entries[i + 1];
    const double dv = 0.5 * (hi.volume - lo.volume);
    table.entries[i].area_second =
        (hi.area - 2.0 * table.entries[i].area + lo.area) / (dv * dv);
  }
  return table;
}

InequalityLedger inequality_ledger(const WarpedMetric& metric,
                                   const std::vector<double>& radii, Exec exec,
                                   int hypothesis_grid, double prime_step_factor,
                                   double second_step_factor) {
  const HypothesisReport hyp = verify_hypotheses(metric, hypothesis_grid, exec);
  if (!hyp.passed())
    throw Error(errc::hypothesis_failure,
                "inequality_ledger: metric fails the curvature hypotheses");
  for (double r : radii)
    if (!(r > 0.0) || !(r < metric.length()))
      throw Error(errc::out_of_domain,
                  "inequality_ledger: radii must be interior");

  InequalityLedger ledger;
  ledger.rows.resize(radii.size());
  parallel_for((std::int64_t)radii.size(), exec, [&](std::int64_t k) {
    const double r = radii[k];
    const SphereGeometry geom = sphere_geometry(metric, r, Pole::north);
    const double volume = volume_of_ball(metric, r, Pole::north);
    const double area = candidate_area(metric, volume);
    const double iprime = candidate_area_prime(metric, volume, prime_step_factor);
    const double isecond =
        candidate_area_second(metric, volume, second_step_factor);
    const double scalar = metric.curvature(r).scalar;

    InequalityRow row;
    row.r = r;
    row.volume = volume;
    row.area = area;
    row.mean_curvature = geom.mean_curvature;
    row.area_prime = iprime;
    row.area_second = isecond;
    row.basic_lhs = isecond * area * area + geom.normal_ricci_integral +
                    geom.area * geom.second_form_norm_sq;
    row.refined_bound = 4.0 * kPi / (area * area) -
                        3.0 * iprime * iprime / (4.0 * area) -
                        scalar * geom.area / (2.0 * area * area);
    row.cy_rhs = geom.area * geom.mean_curvature * geom.mean_curvature +
                 (2.0 / 3.0) * geom.area * scalar;
    row.cy_slack = 16.0 * kPi - row.cy_rhs;
    row.refined_slack = row.refined_bound - isecond;
    ledger.rows[k] = row;
  });
  return ledger;
}

MaxAreaReport max_isoperimetric_area(const ProfileTable& profile,
                                     double tol_rigid_rel) {
  MaxAreaReport report;
  report.tol_rigid = tol_rigid_rel * 4.0 * kPi;
  for (std::size_t i = 0; i < profile.entries.size(); ++i) {
    const ProfileEntry& e = profile.entries[i];
    if (e.area > report.max_area) {
      report.max_area = e.area;
      report.argmax_index = i;
    }
    if (e.volume <= 2.0 * kPi * kPi) {
      const double dev = std::fabs(e.area - s3_reference_profile(e.volume));
      report.max_abs_deviation_from_s3 =
          std::fmax(report.max_abs_deviation_from_s3, dev);
    }
  }
  report.rigid = report.max_area >= 4.0 * kPi - report.tol_rigid;
  return report;
}

}  // namespace isolab
