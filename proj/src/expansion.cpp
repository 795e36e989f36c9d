#include "isolab/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "isolab/hawking.hpp"

namespace isolab {

namespace {
constexpr double kPi = std::numbers::pi;

double pole_radius(const WarpedMetric& m, Pole pole) {
  if (pole == Pole::south && !m.is_closed())
    throw Error(errc::out_of_domain,
                "expansion: south end is a boundary, not a pole");
  return pole == Pole::north ? 0.0 : m.length();
}

void require_smooth_pole(const WarpedMetric& m, Pole pole) {
  const double pr = pole_radius(m, pole);
  if (m.has_seam() &&
      std::fabs(pr - m.seam_radius()) < 1e-9 * std::fmax(1.0, m.length()))
    throw Error(errc::seam_pole, "expansion: pole coincides with the seam");
}

}  // namespace

ExpansionReport analytic_coefficients(const WarpedMetric& metric, Pole pole) {
  require_smooth_pole(metric, pole);
  const double pr = pole_radius(metric, pole);
  const CurvatureData c = metric.curvature(pr);

  ExpansionReport rep;
  rep.pole = pole;
  const double scalar = c.scalar;
  rep.ric_norm_sq =
      c.ric_radial * c.ric_radial + 2.0 * c.ric_tangential * c.ric_tangential;
  rep.laplacian_scalar = laplacian_scalar_at_pole(metric, pole);
  rep.c1_analytic = -scalar / 30.0;
  rep.c2_analytic = (4.0 * scalar * scalar - 2.0 * rep.ric_norm_sq -
                     9.0 * rep.laplacian_scalar) /
                    6300.0;
  rep.area_coefficient6 =
      area_expansion_order6_coefficient(rep.c1_analytic, rep.c2_analytic);
  return rep;
}

ExpansionReport fit_coefficients(const WarpedMetric& metric, Pole pole,
                                 double r_min, double r_max, int sample_count,
                                 Exec exec) {
  require_smooth_pole(metric, pole);
  const double L = metric.length();
  if (!(r_min > 0.0) || !(r_max > r_min) || r_max > 0.3 * L + 1e-12)
    throw Error(errc::out_of_range,
                "fit_coefficients: need 0 < rMin < rMax <= 0.3 L");
  if (sample_count < 20)
    throw Error(errc::out_of_range, "fit_coefficients: sampleCount >= 20");

  ExpansionReport rep = analytic_coefficients(metric, pole);
  rep.window_min = r_min;
  rep.window_max = r_max;
  rep.samples.resize(sample_count);

  parallel_for(sample_count, exec, [&](std::int64_t i) {
    const double r = r_min + (r_max - r_min) * double(i) / double(sample_count - 1);
    const double vol = volume_of_ball(metric, r, pole);
    FitSample& s = rep.samples[i];
    s.r = r;
    s.volume = vol;
    s.y = vol / ((4.0 * kPi / 3.0) * r * r * r) - 1.0;
    const double q = r_max / r;
    s.weight = q * q * q * q * q * q;  // r^-6 up to normalization
  });

  // weighted normal equations in the scaled variable u = (r/r_max)^2
  long double g11 = 0, g12 = 0, g22 = 0, b1 = 0, b2 = 0, wsum = 0;
  for (const FitSample& s : rep.samples) {
    const long double u = (long double)(s.r / r_max) * (s.r / r_max);
    const long double w = s.weight;
    g11 += w * u * u;
    g12 += w * u * u * u;
    g22 += w * u * u * u * u;
    b1 += w * u * s.y;
    b2 += w * u * u * s.y;
    wsum += w;
  }
  const long double tr = 0.5L * (g11 + g22);
  const long double gap = std::sqrt((long double)(0.25L * (g11 - g22) * (g11 - g22) + g12 * g12));
  const long double mu_max = tr + gap, mu_min = tr - gap;
  rep.fit_condition = (mu_min > 0) ? double(mu_max / mu_min)
                                   : std::numeric_limits<double>::infinity();
  if (!(rep.fit_condition < 1e8))
    throw Error(errc::ill_conditioned_fit,
                "fit_coefficients: normal equations too ill-conditioned");

  const long double det = g11 * g22 - g12 * g12;
  const long double d1 = (g22 * b1 - g12 * b2) / det;
  const long double d2 = (g11 * b2 - g12 * b1) / det;
  const double xmax = r_max * r_max;
  rep.c1_fitted = double(d1) / xmax;
  rep.c2_fitted = double(d2) / (xmax * xmax);
  rep.fitted = true;

  long double rss = 0;
  double emax = 0;
  for (const FitSample& s : rep.samples) {
    const long double u = (long double)(s.r / r_max) * (s.r / r_max);
    const double e = double(s.y - d1 * u - d2 * u * u);
    rss += s.weight * (long double)e * e;
    emax = std::fmax(emax, std::fabs(e));
  }
  rep.fit_residual_rms = double(std::sqrt(rss / wsum));
  rep.fit_residual_max = emax;
  return rep;
}

double area_expansion_order6_coefficient(double c1, double c2) {
  return -(11.0 / 9.0) * c1 * c1 + (5.0 / 3.0) * c2;
}

double area_expansion(double c1, double c2, double w) {
  const double w2 = w * w;
  const double c6 = area_expansion_order6_coefficient(c1, c2);
  return 4.0 * kPi * w2 * (1.0 + c1 * w2 + c6 * w2 * w2);
}

ScalarBoundReport scalar_bound_check(const WarpedMetric& metric, Pole pole,
                                     ProfileSource source,
                                     const ProfileTable* profile,
                                     double tol_rigid_rel) {
  const HypothesisReport hyp = verify_hypotheses(metric, 512);
  if (!hyp.passed())
    throw Error(errc::hypothesis_failure,
                "scalar_bound_check: metric fails the curvature hypotheses");

  if (source == ProfileSource::candidate) {
    ProfileTable local;
    if (!profile) {
      local = candidate_profile(metric, 512);
      profile = &local;
    }
    const MaxAreaReport area = max_isoperimetric_area(*profile, tol_rigid_rel);
    if (!area.rigid || area.max_abs_deviation_from_s3 > area.tol_rigid)
      throw Error(errc::precondition_not_rigid,
                  "scalar_bound_check: candidate profile is below the S^3 profile");
  }

  const ExpansionReport exp = analytic_coefficients(metric, pole);
  ScalarBoundReport rep;
  rep.pole = pole;
  rep.scalar_at_pole = -30.0 * exp.c1_analytic;
  rep.slack = std::fabs(rep.scalar_at_pole - 6.0);

  // The proof compares the small-ball area expansion with the S^3 profile
  // on a decreasing sequence of W; the W^2 coefficient extracts c1 >= -1/5.
  const double ws[] = {0.2, 0.1, 0.05, 0.025};
  bool sequence_ok = true;
  for (double w : ws) {
    const double v = (4.0 * kPi / 3.0) * w * w * w;
    const double lhs = area_expansion(exp.c1_analytic, exp.c2_analytic, w);
    const double ref = s3_reference_profile(v);
    rep.sequence.push_back({w, lhs, ref});
    const double tail_tol = 4.0 * kPi * w * w * (w * w * w * w * w * w);
    if (lhs < ref - tail_tol) sequence_ok = false;
  }
  {
    const double w = ws[3];
    const double v = (4.0 * kPi / 3.0) * w * w * w;
    const double ref_ratio = s3_reference_profile(v) / (4.0 * kPi * w * w);
    rep.implied_c1_lower =
        (ref_ratio - 1.0 - exp.area_coefficient6 * w * w * w * w) / (w * w);
  }
  rep.confirmed = sequence_ok && rep.slack < 1e-6 &&
                  exp.c1_analytic >= rep.implied_c1_lower - 1e-5;
  return rep;
}

RicciBoundReport ricci_bound_check(const WarpedMetric& metric, Pole pole) {
  const ExpansionReport exp = analytic_coefficients(metric, pole);
  const double scalar = -30.0 * exp.c1_analytic;
  if (std::fabs(scalar - 6.0) > 1e-6)
    throw Error(errc::precondition_not_rigid,
                "ricci_bound_check: scalar curvature at the pole is not 6");

  RicciBoundReport rep;
  rep.pole = pole;
  rep.ric_norm_sq = exp.ric_norm_sq;
  // with R = 6 and dR = 0 the sixth-order area coefficient collapses to
  // -q/1890 - 17/1575 in |Ric|^2 = q
  rep.coefficient_identity_residual = std::fabs(
      exp.area_coefficient6 - (-exp.ric_norm_sq / 1890.0 - 17.0 / 1575.0));
  rep.slack = std::fabs(rep.ric_norm_sq - 12.0);
  rep.bound_ok = rep.ric_norm_sq <= 12.0 + 1e-6;
  rep.einstein = rep.slack <= 1e-6;
  return rep;
}

}  // namespace isolab
