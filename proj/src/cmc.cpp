#include "isolab/cmc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "isolab/hawking.hpp"
#include "isolab/ode.hpp"

namespace isolab {

namespace {

constexpr double kPi = std::numbers::pi;

using State = std::array<double, 6>;  // r, theta, psi, area, flux, u = Int f^2

struct ShootRhs {
  const WarpedMetric* metric;
  double h;
  double r_lo, r_hi;

  State operator()(double, const State& y) const {
    const double r = std::clamp(y[0], r_lo, r_hi);
    const FJet j = metric->jet(r);
    const double f = j.f;
    const double sth = std::sin(y[1]);
    const double cth = std::cos(y[1]);
    const double sps = std::sin(y[2]);
    const double cps = std::cos(y[2]);
    const double sth_safe =
        (std::fabs(sth) > 1e-300) ? sth : std::copysign(1e-300, sth);

    State d;
    d[0] = cps;
    d[1] = sps / f;
    d[2] = h - 2.0 * (j.f1 / f) * sps + cps * (cth / sth_safe) / f;
    d[3] = 2.0 * kPi * f * sth;
    d[4] = 2.0 * kPi * sth * sps * y[5] / f;
    d[5] = f * f * cps;
    return d;
  }
};

double wrap_angle(double psi) { return std::remainder(psi, 2.0 * kPi); }

}  // namespace

CMCSolution shoot_cmc(const WarpedMetric& metric, double r0, double theta0,
                      double h, double closure_tol, double ode_tol) {
  const double L = metric.length();
  if (!(r0 > 0.0) || !(r0 < L))
    throw Error(errc::out_of_domain, "shoot_cmc: start must be interior in r");
  const bool mirrored = theta0 > kPi / 2.0;
  if (!(std::fabs(theta0) < 1e-12 || std::fabs(theta0 - kPi) < 1e-12))
    throw Error(errc::out_of_domain, "shoot_cmc: theta0 must be 0 or pi");

  CMCSolution sol;
  sol.h = h;
  sol.r0 = r0;
  sol.theta0 = mirrored ? kPi : 0.0;

  // The raw system is singular on the axis (the revolution weight vanishes),
  // so the first arc comes from the local umbilic expansion about the start.
  const FJet j0 = metric.jet(r0);
  const double f0 = j0.f;
  const double alpha = 0.5 * (h - 2.0 * j0.f1 / f0);
  const double s0 = std::fmin(std::fmin(1e-4 * L, 1e-2 * f0),
                              1e-3 / std::fmax(std::fabs(alpha), 1.0));
  const double u0 = metric.ball_volume(r0) / (4.0 * kPi);

  State y;
  y[0] = r0 - 0.5 * alpha * s0 * s0;
  y[1] = s0 / f0 +
         (j0.f1 * alpha / (2.0 * f0) - 0.5 * alpha * alpha) * s0 * s0 * s0 /
             (3.0 * f0);
  y[2] = kPi / 2.0 + alpha * s0;
  y[3] = kPi * s0 * s0;
  y[4] = kPi * u0 * s0 * s0 / (f0 * f0);
  y[5] = u0 - 0.5 * f0 * f0 * alpha * s0 * s0;

  const double r_pad = 1e-12 * std::fmax(1.0, L);
  ShootRhs rhs{&metric, h, r_pad, L - (metric.is_closed() ? r_pad : 0.0)};
  CashKarp<6, ShootRhs&> stepper{rhs};

  const double domain_pad = 1e-9 * L;
  // Terminal sections sit where the residual cap has extent sigma = f*theta
  // small against both the surface curvature and the metric scale.
  const double h_scale = std::fmax(std::fabs(h), 1.0);
  double theta_max = y[1];
  double s = s0;
  double hs = s0;

  const auto record = [&](double sv, const State& yv) {
    sol.curve.push_back({sv, yv[0], mirrored ? kPi - yv[1] : yv[1], yv[3], yv[4]});
  };
  record(s, y);

  int end_axis = -1;
  long steps = 0;
  const long max_steps = 200000;
  while (true) {
    if (++steps > max_steps)
      throw Error(errc::step_limit, "shoot_cmc: step limit reached");

    // terminal sections just off the axes; the remaining caps are closed
    // with the same local expansion used at the start
    const double f_here = metric.f(std::clamp(y[0], r_pad, L - r_pad));
    const double cap_eps = std::clamp(1e-3 / (f_here * h_scale), 1e-7, 1e-3);
    const double eps_zero = std::fmin(cap_eps, 0.05 * theta_max);
    const double eps_pi = cap_eps;

    // cap the step at the distance to the section so every step that
    // approaches an axis stays under error control
    const double dircos = std::sin(y[2]) / f_here;  // d theta / ds
    if (dircos > 0.0) {
      const double gap = (kPi - eps_pi) - y[1];
      if (gap > 0.0) hs = std::fmin(hs, 1.05 * gap / dircos + 1e-14);
    } else if (dircos < 0.0) {
      const double gap = y[1] - eps_zero;
      if (gap > 0.0) hs = std::fmin(hs, 1.05 * gap / (-dircos) + 1e-14);
    }

    auto res = stepper.step(s, y, hs, ode_tol, ode_tol);
    if (res.error > 1.0) {
      hs *= std::fmax(0.1, 0.9 * std::pow(res.error, -0.25));
      if (hs < 1e-16 * std::fmax(1.0, L))
        throw Error(errc::stiffness_failure, "shoot_cmc: step underflow");
      continue;
    }

    s += hs;
    y = res.y;
    theta_max = std::fmax(theta_max, y[1]);
    record(s, y);
    if (y[1] >= kPi - eps_pi && dircos > 0.0) {
      end_axis = 1;
      break;
    }
    if (y[1] <= eps_zero && dircos < 0.0) {
      end_axis = 0;
      break;
    }
    if (y[0] < domain_pad || y[0] > L - domain_pad)
      throw Error(errc::domain_escape, "shoot_cmc: curve left the r-domain");
    hs *= std::fmin(5.0, 0.9 * std::pow(std::fmax(res.error, 1e-10), -0.2));
  }

  const FJet je = metric.jet(std::clamp(y[0], r_pad, L - r_pad));
  const double fe = je.f;
  const double sine = std::sin(y[2]);
  double residual, sigma;
  if (end_axis == 1) {
    const double u_end = kPi - y[1];
    const double chi = wrap_angle(y[2] - kPi / 2.0);
    const double chi_reg = -(h - 2.0 * je.f1 / fe) * fe * u_end / 2.0;
    residual = chi - chi_reg;
    sigma = fe * u_end;
  } else {
    const double chi = wrap_angle(y[2] + kPi / 2.0);
    const double chi_reg = -(h + 2.0 * je.f1 / fe) * fe * y[1] / 2.0;
    residual = chi - chi_reg;
    sigma = fe * y[1];
  }

  sol.area = y[3] + kPi * sigma * sigma;
  const double flux =
      y[4] + std::copysign(kPi * y[5] * sigma * sigma / (fe * fe), sine);
  sol.flux_volume = flux;
  const double total = metric.total_volume();
  sol.enclosed_volume = std::fmin(std::fabs(flux), total - std::fabs(flux));
  sol.outward = flux >= 0.0;
  sol.closure_residual = residual;
  sol.closed = std::fabs(residual) <= closure_tol;
  sol.end_axis = mirrored ? 1 - end_axis : end_axis;
  return sol;
}

CMCSolution find_closed_cmc(const WarpedMetric& metric, double h,
                            double r0_init, double closure_tol) {
  const double L = metric.length();
  if (!(r0_init > 0.0) || !(r0_init < L))
    throw Error(errc::out_of_domain, "find_closed_cmc: r0 must be interior");

  const auto try_shoot = [&](double r0) -> std::optional<CMCSolution> {
    if (!(r0 > 1e-6 * L) || !(r0 < L * (1.0 - 1e-6))) return std::nullopt;
    try {
      return shoot_cmc(metric, r0, 0.0, h, closure_tol);
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  auto first = try_shoot(r0_init);
  if (first && first->closed) return *first;

  // scan for a sign change of the closure residual on one terminal branch,
  // then bisect
  struct Probe {
    double r0;
    double residual;
    int axis;
  };
  std::vector<Probe> probes;
  if (first) probes.push_back({r0_init, first->closure_residual, first->end_axis});
  const double step = 0.02 * L;
  for (int k = 1; k <= 24; ++k) {
    for (double sgn : {1.0, -1.0}) {
      const double r0 = r0_init + sgn * k * step;
      auto sol = try_shoot(r0);
      if (sol) probes.push_back({r0, sol->closure_residual, sol->end_axis});
    }
  }
  std::sort(probes.begin(), probes.end(),
            [](const Probe& a, const Probe& b) { return a.r0 < b.r0; });

  for (std::size_t i = 0; i + 1 < probes.size(); ++i) {
    const Probe& a = probes[i];
    const Probe& b = probes[i + 1];
    if (a.axis != b.axis || a.residual * b.residual > 0.0) continue;
    double lo = a.r0, hi = b.r0, flo = a.residual;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      auto sol = try_shoot(mid);
      if (!sol)
        throw Error(errc::numerical_failure,
                    "find_closed_cmc: shot failed inside bracket");
      if (sol->closed) return *sol;
      if (sol->closure_residual * flo <= 0.0) {
        hi = mid;
      } else {
        lo = mid;
        flo = sol->closure_residual;
      }
    }
    auto sol = try_shoot(0.5 * (lo + hi));
    if (sol && sol->closed) return *sol;
  }
  throw Error(errc::no_bracket,
              "find_closed_cmc: no closure bracket found near r0");
}

ComparisonReport compare_with_profile(const WarpedMetric& metric,
                                      const ProfileTable& profile,
                                      const std::vector<double>& volumes,
                                      Exec exec, double volume_match_rel,
                                      double flag_rel) {
  const HypothesisReport hyp = verify_hypotheses(metric, 512, exec);
  if (!hyp.passed())
    throw Error(errc::hypothesis_failure,
                "compare_with_profile: metric fails the curvature hypotheses");
  const double total = metric.total_volume();
  if (std::fabs(profile.total_volume - total) > 1e-9 * total)
    throw Error(errc::out_of_range,
                "compare_with_profile: profile belongs to a different metric");
  for (double v : volumes)
    if (!(v > 0.0) || !(v < total))
      throw Error(errc::out_of_range,
                  "compare_with_profile: volumes must be interior");

  ComparisonReport report;
  report.records.resize(volumes.size());

  parallel_for((std::int64_t)volumes.size(), exec, [&](std::int64_t vi) {
    const double target = volumes[vi];
    CompetitorRecord rec;
    rec.target_volume = target;
    rec.candidate_area = candidate_area(metric, target);

    const double r0 = metric.radius_for_volume(target);
    const FJet j = metric.jet(r0);
    const double h_center = 2.0 * j.f1 / j.f;
    const double h_scale = std::fmax(std::fabs(h_center), 0.5);

    // choose the sweep density so consecutive closed solutions move the
    // enclosed volume by less than the matching window
    const double dh_dr = 2.0 * (j.f2 * j.f - j.f1 * j.f1) / (j.f * j.f);
    const double dv_dh =
        std::fabs(4.0 * kPi * j.f * j.f / (dh_dr != 0.0 ? dh_dr : 1e-3));
    const double window = 2.0 * volume_match_rel * target;
    int count = (int)std::ceil(0.5 * h_scale * dv_dh / (0.25 * window));
    count = std::clamp(count, 21, 201);

    for (int side = 0; side < 2; ++side) {
      for (int k = 0; k < count; ++k) {
        const double t = -0.25 + 0.5 * double(k) / double(count - 1);
        const double h = (side == 0 ? 1.0 : -1.0) * (h_center + t * h_scale);
        CMCSolution sol;
        try {
          sol = find_closed_cmc(metric, h, r0);
        } catch (const Error&) {
          continue;
        }
        if (!sol.closed) continue;
        ++rec.solutions_found;
        if (std::fabs(sol.enclosed_volume - target) > volume_match_rel * target)
          continue;
        ++rec.volume_matched;
        const double cand = candidate_area(metric, sol.enclosed_volume);
        const double deficit = (cand - sol.area) / cand;
        rec.max_deficit_rel = std::fmax(rec.max_deficit_rel, deficit);
        if (!(sol.area >= rec.best_area)) {  // also catches the first NaN
          rec.best_area = sol.area;
          rec.best_volume = sol.enclosed_volume;
          rec.best_h = sol.h;
        }
      }
    }
    rec.beaten = rec.max_deficit_rel > flag_rel;
    report.records[vi] = rec;
  });

  for (const CompetitorRecord& r : report.records)
    report.any_beaten = report.any_beaten || r.beaten;
  return report;
}

}  // namespace isolab
