#include <doctest.h>

#include <cmath>
#include <numbers>

#include "isolab/hawking.hpp"
#include "test_support.hpp"

using namespace isolab;
using test_support::rel_err;

namespace {
constexpr double kPi = std::numbers::pi;

double scaled_mass_closed_form(double lam, double u) {
  return 32.0 * std::pow(kPi, 1.5) * std::pow(u, 1.5) *
         (1.0 - 1.0 / (lam * lam)) / lam;
}

// rebuilds the forward difference quotients after editing masses
void refresh_mass_prime(HawkingTable& t) {
  const std::size_t n = t.entries.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1 < n) ? i : i - 1;
    t.entries[i].mass_prime =
        (t.entries[j + 1].mass - t.entries[j].mass) /
        (t.entries[j + 1].volume - t.entries[j].volume);
  }
}

}  // namespace

TEST_CASE("hawking mass pointwise values") {
  CHECK(hawking_mass(4.0 * kPi, 0.0) == 0.0);
  CHECK(hawking_mass(0.0, 123.0) == 0.0);
  CHECK(hawking_mass(0.0, std::numeric_limits<double>::infinity()) == 0.0);
  CHECK_THROWS_AS(hawking_mass(-1.0, 0.0), Error);

  // algebraic vanishing on the round profile: I = 4 pi sin^2 r, I' = 2 cot r
  for (double r : {0.3, 0.9, kPi / 2.0, 2.2, 2.9}) {
    const double s = std::sin(r);
    const double mass = hawking_mass(4.0 * kPi * s * s, 2.0 / std::tan(r));
    CHECK(std::fabs(mass) < 1e-9);
  }
}

TEST_CASE("round mass table vanishes and is monotone") {
  const WarpedMetric round = build_metric(WarpingSpec::round());
  const ProfileTable p = candidate_profile(round, 512);
  const HawkingTable t = hawking_table(p);
  for (const HawkingEntry& e : t.entries) CHECK(std::fabs(e.mass) < 1e-4);
  CHECK(std::fabs(t.limit_at_zero) < 1e-3);
  CHECK(t.monotone_on_first_half);

  const MonotonicityVerdict v = check_monotonicity(t, round.total_volume());
  CHECK(v.monotone);
}

TEST_CASE("scaled-sphere mass matches the closed form") {
  for (double lam : {1.05, 1.2, 1.5}) {
    const WarpedMetric m = build_metric(WarpingSpec::scaled(lam));
    const ProfileTable p = candidate_profile(m, 512);
    const HawkingTable t = hawking_table(p);
    int checked = 0;
    for (std::size_t i = 0; i < p.entries.size(); ++i) {
      const double s = std::sin(lam * p.entries[i].radius);
      const double u = s * s;
      if (u <= 0.01) continue;
      CHECK(rel_err(t.entries[i].mass, scaled_mass_closed_form(lam, u)) < 1e-4);
      ++checked;
    }
    CHECK(checked > 400);
    const MonotonicityVerdict v = check_monotonicity(t, m.total_volume());
    CHECK(v.monotone);
    CHECK(v.min_derivative > 0.0);
  }
}

TEST_CASE("mass limit at zero volume") {
  const WarpedMetric m105 = build_metric(WarpingSpec::scaled(1.05));
  CHECK(std::fabs(hawking_table(candidate_profile(m105, 512)).limit_at_zero) <
        1e-3);
  const WarpedMetric m15 = build_metric(WarpingSpec::scaled(1.5));
  CHECK(std::fabs(hawking_table(candidate_profile(m15, 1024)).limit_at_zero) <
        1e-3);
}

TEST_CASE("an injected violation flips the monotonicity verdict") {
  const WarpedMetric m = build_metric(WarpingSpec::scaled(1.2));
  HawkingTable t = hawking_table(candidate_profile(m, 256));
  CHECK(check_monotonicity(t, m.total_volume()).monotone);
  const std::size_t k = t.entries.size() / 4;
  t.entries[k].mass -= 2.0;
  refresh_mass_prime(t);
  const MonotonicityVerdict v = check_monotonicity(t, m.total_volume());
  CHECK(!v.monotone);
  // the forward quotient into the decreased node is the violating one
  CHECK(v.worst_index == k - 1);
}

TEST_CASE("monotonicity verdicts survive grid refinement") {
  std::vector<WarpedMetric> metrics = {
      build_metric(WarpingSpec::round()),
      build_metric(WarpingSpec::scaled(1.2)),
      double_metric(build_metric(WarpingSpec::hemisphere(1.3)))};
  for (const WarpedMetric& m : metrics) {
    const HawkingTable coarse = hawking_table(candidate_profile(m, 256));
    const HawkingTable fine = hawking_table(candidate_profile(m, 512));
    CHECK(check_monotonicity(coarse, m.total_volume()).monotone ==
          check_monotonicity(fine, m.total_volume()).monotone);
  }
}

TEST_CASE("rigidity ODE right-hand side") {
  CHECK(rel_err(rigidity_ode_rhs(2.0 * kPi), 2.0) < 1e-14);
  CHECK(rigidity_ode_rhs(4.0 * kPi) == 0.0);
  for (double r : {0.3, 0.8, 1.2, kPi / 2.0}) {
    const double s = std::sin(r);
    CHECK(std::fabs(rigidity_ode_rhs(4.0 * kPi * s * s) - 2.0 / std::tan(r)) <
          1e-8);
  }
  CHECK_THROWS_AS(rigidity_ode_rhs(0.0), Error);
  CHECK_THROWS_AS(rigidity_ode_rhs(-1.0), Error);
  CHECK_THROWS_AS(rigidity_ode_rhs(4.0 * kPi + 1e-9), Error);
}

TEST_CASE("the round profile solves the rigidity ODE") {
  const WarpedMetric round = build_metric(WarpingSpec::round());
  const ProfileTable p = candidate_profile(round, 256);
  for (const ProfileEntry& e : p.entries) {
    if (!(e.volume > 0.0) || !(e.volume < 0.5 * p.total_volume)) continue;
    CHECK(std::fabs(e.area_prime - rigidity_ode_rhs(e.area)) < 1e-4);
  }
}

TEST_CASE("rigidity ODE reproduces the S3 profile") {
  const ProfileTable sol = integrate_rigidity_ode(1e-3, std::nullopt, kPi * kPi);
  for (const ProfileEntry& e : sol.entries)
    CHECK(rel_err(e.area, s3_reference_profile(e.volume)) < 1e-6);

  // seeding on the round profile keeps the residual tiny all along
  const ProfileTable sol2 = integrate_rigidity_ode(1.0, std::nullopt, kPi * kPi);
  for (const ProfileEntry& e : sol2.entries)
    CHECK(rel_err(e.area, s3_reference_profile(e.volume)) < 1e-8);

  // rhs = 0 boundary: constant in one step
  const ProfileTable flat = integrate_rigidity_ode(1.0, 4.0 * kPi, kPi * kPi);
  CHECK(flat.entries.size() == 1);
  CHECK(flat.entries.front().area == 4.0 * kPi);

  CHECK_THROWS_AS(integrate_rigidity_ode(0.0, std::nullopt, 1.0), Error);
  CHECK_THROWS_AS(integrate_rigidity_ode(1e-3, 5.0 * kPi, 1.0), Error);
}

TEST_CASE("inequality ledger on the round sphere") {
  const WarpedMetric round = build_metric(WarpingSpec::round());
  std::vector<double> radii(50);
  for (int i = 0; i < 50; ++i) radii[i] = kPi * (i + 1) / 51.0;
  const InequalityLedger ledger = inequality_ledger(round, radii);
  REQUIRE(ledger.rows.size() == 50);
  for (const InequalityRow& row : ledger.rows) {
    // exact values: I'' I^2 = -8 pi, Int(Ric + |A|^2) = 8 pi
    CHECK(std::fabs(row.basic_lhs) < 2e-3);
    // geodesic spheres saturate the Christodoulou-Yau bound
    CHECK(std::fabs(row.cy_slack) < 1e-6);
    // equality case of the refined estimate, up to I''-scale differencing
    CHECK(std::fabs(row.refined_slack) <
          1e-4 * std::fmax(1.0, std::fabs(row.area_second)));
  }
}

TEST_CASE("Christodoulou-Yau slack is nonnegative on hypothesis metrics") {
  std::vector<WarpedMetric> metrics = {
      build_metric(WarpingSpec::scaled(1.2)),
      build_metric(WarpingSpec::scaled(1.5)),
      double_metric(build_metric(WarpingSpec::hemisphere(1.2)))};
  for (const WarpedMetric& m : metrics) {
    std::vector<double> radii(20);
    for (int i = 0; i < 20; ++i) radii[i] = m.length() * (i + 1) / 21.0;
    const InequalityLedger ledger = inequality_ledger(m, radii);
    for (const InequalityRow& row : ledger.rows)
      CHECK(row.cy_slack >= -1e-6);
  }
}

TEST_CASE("ledger refuses metrics violating the hypotheses") {
  const WarpedMetric m = build_metric(WarpingSpec::scaled(0.9));
  try {
    inequality_ledger(m, {0.5});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::hypothesis_failure);
  }
}

TEST_CASE("max isoperimetric area and the rigidity verdict") {
  const WarpedMetric round = build_metric(WarpingSpec::round());
  const MaxAreaReport r = max_isoperimetric_area(candidate_profile(round, 256));
  CHECK(r.rigid);
  CHECK(rel_err(r.max_area, 4.0 * kPi) < 1e-9);

  const WarpedMetric sc = build_metric(WarpingSpec::scaled(1.2));
  const MaxAreaReport s = max_isoperimetric_area(candidate_profile(sc, 256));
  CHECK(!s.rigid);
  CHECK(rel_err(s.max_area, 4.0 * kPi / 1.44) < 1e-9);

  // lambda close to 1 still separates from the round case
  const WarpedMetric near = build_metric(WarpingSpec::scaled(1.01));
  const MaxAreaReport n = max_isoperimetric_area(candidate_profile(near, 256));
  CHECK(!n.rigid);
}
