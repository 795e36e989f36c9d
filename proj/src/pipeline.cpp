#include "isolab/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>

#include "isolab/io.hpp"

namespace isolab {

namespace {

constexpr double kPi = std::numbers::pi;
using nlohmann::json;

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

MetricOptions metric_options(const RunConfig& cfg) {
  MetricOptions opt;
  opt.pole_window_factor = cfg.tolerances.pole_window_factor;
  opt.quad_rel = cfg.tolerances.quad_rel;
  opt.root_xtol_factor = cfg.tolerances.root_xtol_factor;
  return opt;
}

WarpedMetric prepare(const RunConfig& cfg, bool need_closed, bool* doubled) {
  WarpedMetric m = build_metric(cfg.metric, metric_options(cfg));
  bool dd = false;
  if (need_closed && m.has_boundary()) {
    m = double_metric(m, cfg.tolerances.geodesic_boundary_tol);
    dd = true;
  }
  if (doubled) *doubled = dd;
  return m;
}

json hypotheses_json(const HypothesisReport& rep) {
  json j;
  j["scalar_ok"] = rep.scalar_ok;
  j["ricci_ok"] = rep.ricci_ok;
  j["min_scalar"] = rep.min_scalar;
  j["min_ricci_eigenvalue"] = rep.min_ricci_eigenvalue;
  j["violations"] = json::array();
  for (const HypothesisViolation& v : rep.violations)
    j["violations"].push_back({{"r", v.r}, {"quantity", v.quantity}, {"value", v.value}});
  j["seam"] = json::array();
  for (const SeamSample& s : rep.seam)
    j["seam"].push_back({{"side", s.side == Side::below ? "below" : "above"},
                         {"scalar", s.curvature.scalar},
                         {"ric_radial", s.curvature.ric_radial},
                         {"ric_tangential", s.curvature.ric_tangential}});
  return j;
}

json expansion_json(const ExpansionReport& rep) {
  json j;
  j["pole"] = pole_name(rep.pole);
  j["c1_analytic"] = rep.c1_analytic;
  j["c2_analytic"] = rep.c2_analytic;
  j["ric_norm_sq"] = rep.ric_norm_sq;
  j["laplacian_scalar"] = rep.laplacian_scalar;
  j["area_coefficient6"] = rep.area_coefficient6;
  if (rep.fitted) {
    j["c1_fitted"] = rep.c1_fitted;
    j["c2_fitted"] = rep.c2_fitted;
    j["fit_residual_rms"] = rep.fit_residual_rms;
    j["fit_residual_max"] = rep.fit_residual_max;
    j["fit_condition"] = rep.fit_condition;
    j["window"] = {rep.window_min, rep.window_max};
    j["sample_count"] = rep.samples.size();
  }
  return j;
}

json scalar_bound_json(const ScalarBoundReport& rep) {
  json j;
  j["pole"] = pole_name(rep.pole);
  j["scalar_at_pole"] = rep.scalar_at_pole;
  j["slack"] = rep.slack;
  j["implied_c1_lower"] = rep.implied_c1_lower;
  j["confirmed"] = rep.confirmed;
  j["sequence"] = json::array();
  for (const auto& row : rep.sequence)
    j["sequence"].push_back({{"W", row[0]}, {"expansion_area", row[1]}, {"reference_area", row[2]}});
  return j;
}

json ricci_bound_json(const RicciBoundReport& rep) {
  json j;
  j["pole"] = pole_name(rep.pole);
  j["ric_norm_sq"] = rep.ric_norm_sq;
  j["coefficient_identity_residual"] = rep.coefficient_identity_residual;
  j["slack"] = rep.slack;
  j["bound_ok"] = rep.bound_ok;
  j["einstein"] = rep.einstein;
  return j;
}

std::vector<double> default_ledger_radii(const WarpedMetric& m, int count = 50) {
  std::vector<double> radii(count);
  for (int i = 0; i < count; ++i)
    radii[i] = m.length() * double(i + 1) / double(count + 1);
  return radii;
}

std::vector<double> default_cmc_volumes(const WarpedMetric& m, int count = 10) {
  std::vector<double> volumes(count);
  for (int i = 0; i < count; ++i)
    volumes[i] = m.total_volume() * (0.05 + 0.45 * double(i) / double(count - 1));
  return volumes;
}

std::string cmc_report_csv(const ComparisonReport& rep) {
  std::string out =
      "V,candidateArea,bestArea,bestVolume,bestH,solutions,matched,deficitRel,"
      "beaten\n";
  for (const CompetitorRecord& r : rep.records) {
    out += fmt_full(r.target_volume) + "," + fmt_full(r.candidate_area) + "," +
           fmt_full(r.best_area) + "," + fmt_full(r.best_volume) + "," +
           fmt_full(r.best_h) + "," + std::to_string(r.solutions_found) + "," +
           std::to_string(r.volume_matched) + "," +
           fmt_full(r.max_deficit_rel) + "," + (r.beaten ? "true" : "false") +
           "\n";
  }
  return out;
}

void write_json(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace

WarpedMetric prepare_metric(const RunConfig& config, bool* doubled) {
  return prepare(config, true, doubled);
}

RigidityOutcome run_rigidity_pipeline(const RunConfig& config, Exec exec) {
  const Tolerances& tol = config.tolerances;
  RigidityOutcome out;
  out.metric = prepare(config, true, &out.doubled);

  out.hypotheses =
      verify_hypotheses(out.metric, config.grid.curvature_size, exec,
                        tol.hypothesis_slack, tol.seam_notch_factor);
  out.hypotheses_ok = out.hypotheses.passed();
  if (!out.hypotheses_ok) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "hypotheses violated: min scalar %.6f, min Ricci eigenvalue %.6f",
                  out.hypotheses.min_scalar, out.hypotheses.min_ricci_eigenvalue);
    out.verdict = buf;
    return out;
  }

  out.profile = candidate_profile(out.metric, config.grid.profile_size, exec,
                                  tol.prime_step_factor);
  out.hawking = hawking_table(out.profile);
  out.monotonicity =
      check_monotonicity(out.hawking, out.metric.total_volume(), tol.mono_factor);
  out.max_area = max_isoperimetric_area(out.profile, tol.rigid_rel);
  out.rigid = out.max_area.rigid;

  if (out.rigid) {
    out.scalar_north = scalar_bound_check(out.metric, Pole::north,
                                          ProfileSource::candidate,
                                          &out.profile, tol.rigid_rel);
    out.scalar_south = scalar_bound_check(out.metric, Pole::south,
                                          ProfileSource::candidate,
                                          &out.profile, tol.rigid_rel);
    out.ricci_north = ricci_bound_check(out.metric, Pole::north);
    out.ricci_south = ricci_bound_check(out.metric, Pole::south);
    const bool pinned = out.scalar_north->confirmed && out.scalar_south->confirmed &&
                        out.ricci_north->einstein && out.ricci_south->einstein;
    std::string text = out.doubled ? "rigid (Min-Oo instance): " : "rigid: ";
    text += "profile coincides with S3";
    if (pinned) text += ", R = 6 at the poles, Einstein at the poles";
    out.verdict = text;
  } else {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "not rigid: max area %.4f < 4*pi",
                  out.max_area.max_area);
    out.verdict = buf;
  }
  return out;
}

nlohmann::json rigidity_verdict_json(const RigidityOutcome& out) {
  json j;
  j["metric"] = out.metric.describe();
  j["doubled"] = out.doubled;
  j["hypotheses"] = hypotheses_json(out.hypotheses);
  if (out.hypotheses_ok) {
    j["monotonicity"] = {{"monotone", out.monotonicity.monotone},
                         {"min_derivative", out.monotonicity.min_derivative},
                         {"worst_volume", out.monotonicity.worst_volume},
                         {"tolerance", out.monotonicity.tolerance},
                         {"limit_at_zero", out.hawking.limit_at_zero}};
    j["max_area"] = out.max_area.max_area;
    j["max_area_deviation_from_s3"] = out.max_area.max_abs_deviation_from_s3;
    j["rigid"] = out.rigid;
    if (out.scalar_north) j["scalar_bound_north"] = scalar_bound_json(*out.scalar_north);
    if (out.scalar_south) j["scalar_bound_south"] = scalar_bound_json(*out.scalar_south);
    if (out.ricci_north) j["ricci_bound_north"] = ricci_bound_json(*out.ricci_north);
    if (out.ricci_south) j["ricci_bound_south"] = ricci_bound_json(*out.ricci_south);
  }
  j["verdict"] = out.verdict;
  return j;
}

namespace {

int cmd_curvature(const RunConfig& cfg, Exec exec) {
  const WarpedMetric m = prepare(cfg, false, nullptr);
  const HypothesisReport rep =
      verify_hypotheses(m, cfg.grid.curvature_size, exec,
                        cfg.tolerances.hypothesis_slack,
                        cfg.tolerances.seam_notch_factor);
  write_text_file(join_path(cfg.output_dir, "curvature.csv"),
                  curvature_csv(m, cfg.grid.curvature_size));
  json j = hypotheses_json(rep);
  j["metric"] = m.describe();
  write_json(join_path(cfg.output_dir, "hypotheses.json"), j);
  return rep.passed() ? 0 : 1;
}

int cmd_profile(const RunConfig& cfg, Exec exec) {
  const WarpedMetric m = prepare(cfg, true, nullptr);
  const ProfileTable profile = candidate_profile(
      m, cfg.grid.profile_size, exec, cfg.tolerances.prime_step_factor);
  write_text_file(join_path(cfg.output_dir, "profile.csv"), profile_csv(profile));
  return 0;
}

int cmd_hawking(const RunConfig& cfg, Exec exec) {
  const WarpedMetric m = prepare(cfg, true, nullptr);
  const ProfileTable profile = candidate_profile(
      m, cfg.grid.profile_size, exec, cfg.tolerances.prime_step_factor);
  const HawkingTable table = hawking_table(profile);
  const MonotonicityVerdict mono =
      check_monotonicity(table, m.total_volume(), cfg.tolerances.mono_factor);
  write_text_file(join_path(cfg.output_dir, "profile.csv"), profile_csv(profile));
  write_text_file(join_path(cfg.output_dir, "hawking.csv"), hawking_csv(table));
  write_json(join_path(cfg.output_dir, "monotonicity.json"),
             {{"metric", m.describe()},
              {"monotone", mono.monotone},
              {"min_derivative", mono.min_derivative},
              {"worst_volume", mono.worst_volume},
              {"tolerance", mono.tolerance},
              {"limit_at_zero", table.limit_at_zero}});
  return 0;
}

int cmd_rigidity(const RunConfig& cfg, Exec exec) {
  const RigidityOutcome out = run_rigidity_pipeline(cfg, exec);
  write_json(join_path(cfg.output_dir, "verdict.json"),
             rigidity_verdict_json(out));
  if (out.hypotheses_ok) {
    write_text_file(join_path(cfg.output_dir, "profile.csv"),
                    profile_csv(out.profile));
    write_text_file(join_path(cfg.output_dir, "hawking.csv"),
                    hawking_csv(out.hawking));
  }
  return out.hypotheses_ok ? 0 : 1;
}

int cmd_expansion(const RunConfig& cfg, Exec exec) {
  const WarpedMetric m = prepare(cfg, false, nullptr);
  json j;
  j["metric"] = m.describe();
  std::vector<Pole> poles = {Pole::north};
  if (m.is_closed()) poles.push_back(Pole::south);
  for (Pole pole : poles) {
    const ExpansionReport rep = fit_coefficients(
        m, pole, cfg.fit_window.r_min_factor * m.length(),
        cfg.fit_window.r_max_factor * m.length(), cfg.fit_window.samples, exec);
    j[pole == Pole::north ? "north" : "south"] = expansion_json(rep);
    write_text_file(
        join_path(cfg.output_dir,
                  std::string("expansion_samples_") + pole_name(pole) + ".csv"),
        fit_samples_csv(rep.samples));
  }
  write_json(join_path(cfg.output_dir, "expansion.json"), j);
  return 0;
}

int cmd_inequalities(const RunConfig& cfg, Exec exec) {
  const WarpedMetric m = prepare(cfg, true, nullptr);
  const InequalityLedger ledger = inequality_ledger(
      m, default_ledger_radii(m), exec, cfg.grid.curvature_size,
      cfg.tolerances.prime_step_factor, cfg.tolerances.second_step_factor);
  write_text_file(join_path(cfg.output_dir, "inequalities.csv"),
                  ledger_csv(ledger));
  return 0;
}

int cmd_double(const RunConfig& cfg, Exec) {
  const WarpedMetric base = prepare(cfg, false, nullptr);
  const WarpedMetric doubled =
      double_metric(base, cfg.tolerances.geodesic_boundary_tol);
  const FJet boundary = base.jet(base.length(), Side::below);
  write_json(join_path(cfg.output_dir, "double_report.json"),
             {{"metric", base.describe()},
              {"doubled_metric", doubled.describe()},
              {"boundary_fprime", boundary.f1},
              {"seam_radius", doubled.seam_radius()},
              {"total_volume", doubled.total_volume()}});
  std::string csv = "r,f,fprime\n";
  const int n = cfg.grid.curvature_size;
  for (int i = 0; i <= n; ++i) {
    const double r = doubled.length() * double(i) / double(n);
    const FJet j = doubled.jet(r);
    csv += fmt_full(r) + "," + fmt_full(j.f) + "," + fmt_full(j.f1) + "\n";
  }
  write_text_file(join_path(cfg.output_dir, "doubled.csv"), csv);
  return 0;
}

int cmd_cmc(const RunConfig& cfg, Exec exec) {
  const WarpedMetric m = prepare(cfg, true, nullptr);
  const ProfileTable profile = candidate_profile(
      m, cfg.grid.profile_size, exec, cfg.tolerances.prime_step_factor);
  const ComparisonReport rep = compare_with_profile(
      m, profile, default_cmc_volumes(m), exec,
      cfg.tolerances.cmc_volume_match_rel, cfg.tolerances.competitor_flag_rel);
  write_text_file(join_path(cfg.output_dir, "cmc_report.csv"),
                  cmc_report_csv(rep));
  // export the best competitor curve at the first and the median volume
  const std::size_t picks[] = {0, rep.records.size() / 2};
  for (std::size_t idx : picks) {
    const CompetitorRecord& r = rep.records[idx];
    if (!(r.best_h == r.best_h)) continue;  // no match found
    try {
      const CMCSolution sol =
          find_closed_cmc(m, r.best_h, m.radius_for_volume(r.target_volume),
                          cfg.tolerances.closure_tol);
      write_text_file(join_path(cfg.output_dir,
                                "cmc_curve_" + std::to_string(idx) + ".csv"),
                      curve_csv(sol));
    } catch (const Error&) {
      // sweep artifact only; the report row already records the comparison
    }
  }
  return 0;
}

int cmd_full_report(const RunConfig& cfg, Exec exec) {
  const int curvature_rc = cmd_curvature(cfg, exec);
  const RigidityOutcome out = run_rigidity_pipeline(cfg, exec);
  json verdict = rigidity_verdict_json(out);

  if (out.metric.has_seam()) {
    const WarpedMetric base = prepare(cfg, false, nullptr);
    const FJet boundary = base.jet(base.length(), Side::below);
    verdict["doubling"] = {{"boundary_fprime", boundary.f1},
                           {"seam_radius", out.metric.seam_radius()},
                           {"total_volume", out.metric.total_volume()}};
  }

  if (out.hypotheses_ok) {
    write_text_file(join_path(cfg.output_dir, "profile.csv"),
                    profile_csv(out.profile));
    write_text_file(join_path(cfg.output_dir, "hawking.csv"),
                    hawking_csv(out.hawking));
    const InequalityLedger ledger = inequality_ledger(
        out.metric, default_ledger_radii(out.metric), exec,
        cfg.grid.curvature_size, cfg.tolerances.prime_step_factor,
        cfg.tolerances.second_step_factor);
    write_text_file(join_path(cfg.output_dir, "inequalities.csv"),
                    ledger_csv(ledger));
    cmd_expansion(cfg, exec);
    const ComparisonReport cmc = compare_with_profile(
        out.metric, out.profile, default_cmc_volumes(out.metric), exec,
        cfg.tolerances.cmc_volume_match_rel, cfg.tolerances.competitor_flag_rel);
    write_text_file(join_path(cfg.output_dir, "cmc_report.csv"),
                    cmc_report_csv(cmc));
    verdict["competitors_beaten"] = cmc.any_beaten;
  }

  write_json(join_path(cfg.output_dir, "verdict.json"), verdict);
  return (curvature_rc != 0 || !out.hypotheses_ok) ? 1 : 0;
}

}  // namespace

int run_command(const std::string& command, const RunConfig& config, Exec exec) {
  try {
    if (command == "curvature") return cmd_curvature(config, exec);
    if (command == "profile") return cmd_profile(config, exec);
    if (command == "hawking") return cmd_hawking(config, exec);
    if (command == "rigidity") return cmd_rigidity(config, exec);
    if (command == "expansion") return cmd_expansion(config, exec);
    if (command == "inequalities") return cmd_inequalities(config, exec);
    if (command == "double") return cmd_double(config, exec);
    if (command == "cmc") return cmd_cmc(config, exec);
    if (command == "full-report") return cmd_full_report(config, exec);
    std::cerr << "unknown command: " << command << "\n";
    return int(ExitCode::malformed_config);
  } catch (const Error& e) {
    std::cerr << errc_name(e.code()) << ": " << e.what() << "\n";
    switch (e.code()) {
      case errc::malformed_spec:
        return int(ExitCode::malformed_config);
      case errc::hypothesis_failure:
        return int(ExitCode::hypothesis_violation);
      default:
        return int(ExitCode::numerical_failure);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(ExitCode::numerical_failure);
  }
}

}  // namespace isolab
