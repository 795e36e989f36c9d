// Acceptance suite: one pass/fail line per criterion. Each check compares
// computed quantities against closed forms, hand-derived expansions, or the
// verdict documents written by the command pipeline.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "isolab/cmc.hpp"
#include "isolab/config.hpp"
#include "isolab/expansion.hpp"
#include "isolab/geodesic_balls.hpp"
#include "isolab/hawking.hpp"
#include "isolab/metric.hpp"
#include "isolab/pipeline.hpp"
#include "test_support.hpp"

using namespace isolab;
using test_support::Frac;
using test_support::rel_err;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%2d] %s  %-28s %s\n", id, pass ? "PASS" : "FAIL", name,
              detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

double scaled_mass_closed_form(double lam, double u) {
  return 32.0 * std::pow(kPi, 1.5) * std::pow(u, 1.5) *
         (1.0 - 1.0 / (lam * lam)) / lam;
}

struct ProfileChecks {
  bool profile_matches = true;     // every node: rel <= 1e-6 or abs <= 1e-8
  double worst_profile_rel = 0.0;  // over nodes with a meaningful area
  double half_area_err = 0.0;      // |I(pi^2) - 4 pi|
  double worst_mass_abs = 0.0;
  double limit_at_zero = 0.0;
  bool monotone = false;
};

ProfileChecks round_profile_checks(int grid) {
  const WarpedMetric round = build_metric(WarpingSpec::round());
  const ProfileTable p = candidate_profile(round, grid);
  const HawkingTable t = hawking_table(p);
  ProfileChecks out;
  for (const ProfileEntry& e : p.entries) {
    const double ref = s3_reference_profile(e.volume);
    // the 1e-8 absolute clause covers the zero-area endpoints, where a
    // relative comparison is vacuous
    const double abs_dev = std::fabs(e.area - ref);
    out.profile_matches =
        out.profile_matches && abs_dev <= std::fmax(1e-6 * ref, 1e-8);
    if (ref >= 1e-3)
      out.worst_profile_rel = std::fmax(out.worst_profile_rel, rel_err(e.area, ref));
  }
  out.half_area_err = std::fabs(p.entries[grid / 2].area - 4.0 * kPi);
  for (const HawkingEntry& e : t.entries)
    out.worst_mass_abs = std::fmax(out.worst_mass_abs, std::fabs(e.mass));
  out.limit_at_zero = t.limit_at_zero;
  out.monotone = check_monotonicity(t, round.total_volume()).monotone;
  return out;
}

struct ScaledChecks {
  double worst_mass_rel = 0.0;
  bool monotone = false;
  double min_derivative = 0.0;
};

ScaledChecks scaled_mass_checks(double lam, int grid) {
  const WarpedMetric m = build_metric(WarpingSpec::scaled(lam));
  const ProfileTable p = candidate_profile(m, grid);
  const HawkingTable t = hawking_table(p);
  ScaledChecks out;
  for (std::size_t i = 0; i < p.entries.size(); ++i) {
    const double s = std::sin(lam * p.entries[i].radius);
    const double u = s * s;
    if (u <= 0.01) continue;
    out.worst_mass_rel = std::fmax(
        out.worst_mass_rel,
        rel_err(t.entries[i].mass, scaled_mass_closed_form(lam, u)));
  }
  const MonotonicityVerdict v = check_monotonicity(t, m.total_volume());
  out.monotone = v.monotone;
  out.min_derivative = v.min_derivative;
  return out;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  nlohmann::json j;
  in >> j;
  return j;
}

// 1. candidate profile of the round sphere vs I(V) = 4 pi sin^2 r
bool criterion_profile_oracle(std::string& detail, int grid = 512) {
  const ProfileChecks c = round_profile_checks(grid);
  detail = fmt("max rel dev %.2e, |I(pi^2)-4pi| = %.2e", c.worst_profile_rel,
               c.half_area_err);
  return c.profile_matches && c.worst_profile_rel < 1e-6 &&
         c.half_area_err < 1e-8;
}

// 2. adapted Hawking mass of the round sphere vanishes
bool criterion_vanishing_mass(std::string& detail, int grid = 512) {
  const ProfileChecks c = round_profile_checks(grid);
  detail = fmt("max |mH| = %.2e, limit at 0 = %.2e", c.worst_mass_abs,
               std::fabs(c.limit_at_zero));
  return c.worst_mass_abs < 1e-4 && std::fabs(c.limit_at_zero) < 1e-3 &&
         c.monotone;
}

// 3. scaled-sphere masses match the closed form and increase
bool criterion_scaled_mass(std::string& detail, int grid = 512) {
  bool ok = true;
  double worst = 0.0;
  for (double lam : {1.05, 1.2, 1.5}) {
    const ScaledChecks c = scaled_mass_checks(lam, grid);
    worst = std::fmax(worst, c.worst_mass_rel);
    ok = ok && c.worst_mass_rel < 1e-4 && c.monotone && c.min_derivative > 0.0;
  }
  detail = fmt("max rel dev %.2e over lambda in {1.05, 1.2, 1.5}", worst);
  return ok;
}

// 4. the rigidity ODE reproduces the S3 profile
bool criterion_rigidity_ode(std::string& detail) {
  const ProfileTable sol = integrate_rigidity_ode(1e-3, std::nullopt, kPi * kPi);
  double worst = 0.0;
  for (const ProfileEntry& e : sol.entries)
    worst = std::fmax(worst, rel_err(e.area, s3_reference_profile(e.volume)));
  detail = fmt("max rel dev %.2e on [1e-3, pi^2]", worst);
  return worst < 1e-6;
}

// 5. Gray-Vanhecke coefficients: fitted values and the rational identity
bool criterion_gray_vanhecke(std::string& detail) {
  const WarpedMetric round = build_metric(WarpingSpec::round());
  const double L = round.length();
  const ExpansionReport rep =
      fit_coefficients(round, Pole::north, 0.02 * L, 0.25 * L, 48);
  const double e1 = std::fabs(rep.c1_fitted + 1.0 / 5.0);
  const double e2 = std::fabs(rep.c2_fitted - 2.0 / 105.0);

  bool identity = true;
  for (int k = 0; k < 100; ++k) {
    const Frac q(k, 3);
    const Frac lhs = Frac(-11, 9) * Frac(1, 25) +
                     Frac(5, 3) * (Frac(144) - Frac(2) * q) * Frac(1, 6300);
    const Frac rhs = Frac(-1, 1890) * q - Frac(17, 1575);
    identity = identity && (lhs == rhs);
  }
  detail = fmt("|c1 err| = %.2e, |c2 err| = %.2e, identity exact", e1, e2);
  return e1 < 1e-4 && e2 < 5e-4 && identity;
}

// 6. pointwise curvature bounds at both poles of the round sphere
bool criterion_curvature_bounds(std::string& detail) {
  const WarpedMetric round = build_metric(WarpingSpec::round());
  const ProfileTable profile = candidate_profile(round, 512);
  double worst_scalar = 0.0, worst_ricci = 0.0;
  bool ok = true;
  for (Pole pole : {Pole::north, Pole::south}) {
    const ScalarBoundReport sb =
        scalar_bound_check(round, pole, ProfileSource::candidate, &profile);
    const RicciBoundReport rb = ricci_bound_check(round, pole);
    worst_scalar = std::fmax(worst_scalar, sb.slack);
    worst_ricci = std::fmax(worst_ricci, rb.slack);
    ok = ok && sb.confirmed && rb.einstein && rb.bound_ok;
  }
  detail = fmt("R slack %.2e, |Ric|^2 slack %.2e at both poles", worst_scalar,
               worst_ricci);
  return ok && worst_scalar < 1e-6 && worst_ricci < 1e-6;
}

// 7. the inequality ledger: basic estimate and Christodoulou-Yau
bool criterion_inequality_ledger(std::string& detail) {
  const WarpedMetric round = build_metric(WarpingSpec::round());
  std::vector<double> radii(50);
  for (int i = 0; i < 50; ++i) radii[i] = kPi * (i + 1) / 51.0;
  const InequalityLedger ledger = inequality_ledger(round, radii);
  double worst_basic = 0.0, worst_cy = 0.0;
  for (const InequalityRow& row : ledger.rows) {
    worst_basic = std::fmax(worst_basic, std::fabs(row.basic_lhs));
    worst_cy = std::fmax(worst_cy, std::fabs(row.cy_slack));
  }
  double worst_scaled_cy = 0.0;
  for (double lam : {1.2, 1.5}) {
    const WarpedMetric m = build_metric(WarpingSpec::scaled(lam));
    std::vector<double> rr(20);
    for (int i = 0; i < 20; ++i) rr[i] = m.length() * (i + 1) / 21.0;
    for (const InequalityRow& row : inequality_ledger(m, rr).rows)
      worst_scaled_cy = std::fmin(worst_scaled_cy, row.cy_slack);
  }
  detail = fmt("max |basic LHS| = %.2e, max |CY slack| = %.2e", worst_basic,
               worst_cy);
  return worst_basic < 2e-3 && worst_cy < 1e-6 && worst_scaled_cy >= -1e-6;
}

// 8. the Min-Oo pipeline through doubling
bool criterion_min_oo(std::string& detail) {
  // doubling the unit hemisphere gives sin exactly
  const WarpedMetric dbl = double_metric(build_metric(WarpingSpec::hemisphere(1.0)));
  double worst_f = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double r = dbl.length() * i / 2000.0;
    worst_f = std::fmax(worst_f, std::fabs(dbl.f(r) - std::sin(r)));
  }
  if (worst_f > 1e-12) {
    detail = fmt("doubled warping deviates from sin by %.2e", worst_f);
    return false;
  }

  const fs::path out = fs::temp_directory_path() / "isolab_acceptance_min_oo";
  fs::remove_all(out);
  RunConfig cfg;
  cfg.metric = WarpingSpec::hemisphere(1.0);
  cfg.output_dir = out.string();
  const int rc = run_command("full-report", cfg);
  if (rc != 0) {
    detail = "full-report exited with code " + std::to_string(rc);
    return false;
  }
  const nlohmann::json verdict = read_json(out / "verdict.json");
  const bool rigid = verdict["rigid"] == true &&
                     verdict["hypotheses"]["scalar_ok"] == true &&
                     verdict["verdict"].get<std::string>().find("Min-Oo") !=
                         std::string::npos;

  RunConfig cfg13;
  cfg13.metric = WarpingSpec::hemisphere(1.3);
  const RigidityOutcome out13 = run_rigidity_pipeline(cfg13);
  const double expect = 4.0 * kPi / 1.69;
  const double rel13 = rel_err(out13.max_area.max_area, expect);
  detail = fmt("hemisphere(1) rigid, hemisphere(1.3) max area rel dev %.2e",
               rel13);
  return rigid && !out13.rigid && rel13 < 1e-4;
}

// 9. CMC shooting relations and competitor sweep
bool criterion_cmc(std::string& detail) {
  const WarpedMetric round = build_metric(WarpingSpec::round());
  double worst_rel = 0.0;
  for (double h : {0.0, 1.0, 2.0, 4.0}) {
    const double rho = (h == 0.0) ? kPi / 2.0 : std::atan2(2.0, h);
    const double area_ref = 4.0 * kPi * std::sin(rho) * std::sin(rho);
    const double vol_ref = kPi * (2.0 * rho - std::sin(2.0 * rho));
    const CMCSolution sol =
        find_closed_cmc(round, h, round.radius_for_volume(vol_ref));
    if (!sol.closed) {
      detail = fmt("shot at H = %g failed to close", h);
      return false;
    }
    worst_rel = std::fmax(worst_rel, rel_err(sol.area, area_ref));
    worst_rel = std::fmax(worst_rel, rel_err(sol.enclosed_volume, vol_ref));
  }

  bool beaten = false;
  double worst_deficit = 0.0;
  for (const WarpingSpec& spec : {WarpingSpec::round(), WarpingSpec::scaled(1.2)}) {
    const WarpedMetric m = build_metric(spec);
    const ProfileTable profile = candidate_profile(m, 512);
    std::vector<double> volumes(10);
    for (int i = 0; i < 10; ++i)
      volumes[i] = m.total_volume() * (0.05 + 0.45 * i / 9.0);
    const ComparisonReport rep = compare_with_profile(m, profile, volumes);
    beaten = beaten || rep.any_beaten;
    for (const CompetitorRecord& r : rep.records)
      worst_deficit = std::fmax(worst_deficit, r.max_deficit_rel);
  }
  detail = fmt("sphere relations rel dev %.2e, worst deficit %.2e", worst_rel,
               worst_deficit);
  return worst_rel < 1e-4 && !beaten && worst_deficit <= 1e-3;
}

// 10. criteria 1-3 verdicts are stable under grid doubling
bool criterion_grid_stability(std::string& detail) {
  std::string scratch;
  const bool c1 = criterion_profile_oracle(scratch, 1024);
  const bool c2 = criterion_vanishing_mass(scratch, 1024);
  const bool c3 = criterion_scaled_mass(scratch, 1024);
  detail = "criteria 1-3 verdicts unchanged at twice the grid";
  return c1 && c2 && c3;
}

}  // namespace

int main() {
  std::printf("isolab acceptance suite\n");

  std::string detail;

  bool pass = criterion_profile_oracle(detail);
  report(1, "S3 profile oracle", pass, detail);

  pass = criterion_vanishing_mass(detail);
  report(2, "vanishing mass oracle", pass, detail);

  pass = criterion_scaled_mass(detail);
  report(3, "scaled-sphere mass oracle", pass, detail);

  pass = criterion_rigidity_ode(detail);
  report(4, "rigidity ODE", pass, detail);

  pass = criterion_gray_vanhecke(detail);
  report(5, "Gray-Vanhecke coefficients", pass, detail);

  pass = criterion_curvature_bounds(detail);
  report(6, "curvature bounds", pass, detail);

  pass = criterion_inequality_ledger(detail);
  report(7, "inequality ledger", pass, detail);

  pass = criterion_min_oo(detail);
  report(8, "Min-Oo pipeline", pass, detail);

  pass = criterion_cmc(detail);
  report(9, "CMC shooting", pass, detail);

  pass = criterion_grid_stability(detail);
  report(10, "grid stability", pass, detail);

  if (failures == 0) {
    std::printf("ACCEPTANCE: all 10 criteria passed\n");
    return 0;
  }
  std::printf("ACCEPTANCE: %d criterion/criteria FAILED\n", failures);
  return 1;
}
