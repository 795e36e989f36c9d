#include "isolab/config.hpp"

#include <fstream>

namespace isolab {

using nlohmann::json;

json spec_to_json(const WarpingSpec& spec) {
  json j;
  j["kind"] = spec_kind_name(spec.kind);
  switch (spec.kind) {
    case WarpingSpec::Kind::round:
      break;
    case WarpingSpec::Kind::scaled:
    case WarpingSpec::Kind::hemisphere:
      j["lambda"] = spec.lambda;
      break;
    case WarpingSpec::Kind::series:
      j["coefficients"] = spec.odd_coefficients;
      j["length"] = spec.length;
      j["closed"] = spec.series_closed;
      break;
  }
  return j;
}

WarpingSpec spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw Error(errc::malformed_spec, "metric: expected object with 'kind'");
  const std::string kind = j["kind"].get<std::string>();

  const auto get_lambda = [&]() {
    if (!j.contains("lambda") || !j["lambda"].is_number())
      throw Error(errc::malformed_spec, "metric: '" + kind + "' needs 'lambda'");
    return j["lambda"].get<double>();
  };

  if (kind == "round") return WarpingSpec::round();
  if (kind == "scaled") return WarpingSpec::scaled(get_lambda());
  if (kind == "hemisphere") return WarpingSpec::hemisphere(get_lambda());
  if (kind == "series") {
    if (!j.contains("coefficients") || !j["coefficients"].is_array())
      throw Error(errc::malformed_spec, "metric: series needs 'coefficients'");
    if (!j.contains("length") || !j["length"].is_number())
      throw Error(errc::malformed_spec, "metric: series needs 'length'");
    std::vector<double> odd;
    for (const auto& c : j["coefficients"]) {
      if (!c.is_number())
        throw Error(errc::malformed_spec, "metric: coefficients must be numbers");
      odd.push_back(c.get<double>());
    }
    const bool closed = j.value("closed", false);
    return WarpingSpec::series(std::move(odd), j["length"].get<double>(), closed);
  }
  throw Error(errc::malformed_spec, "metric: unknown kind '" + kind + "'");
}

namespace {

struct TolField {
  const char* name;
  double Tolerances::* member;
};

constexpr TolField kTolFields[] = {
    {"hypothesis_slack", &Tolerances::hypothesis_slack},
    {"pole_window_factor", &Tolerances::pole_window_factor},
    {"seam_notch_factor", &Tolerances::seam_notch_factor},
    {"quad_rel", &Tolerances::quad_rel},
    {"root_xtol_factor", &Tolerances::root_xtol_factor},
    {"prime_step_factor", &Tolerances::prime_step_factor},
    {"second_step_factor", &Tolerances::second_step_factor},
    {"mono_factor", &Tolerances::mono_factor},
    {"rigid_rel", &Tolerances::rigid_rel},
    {"ode_tol", &Tolerances::ode_tol},
    {"closure_tol", &Tolerances::closure_tol},
    {"cmc_volume_match_rel", &Tolerances::cmc_volume_match_rel},
    {"competitor_flag_rel", &Tolerances::competitor_flag_rel},
    {"geodesic_boundary_tol", &Tolerances::geodesic_boundary_tol},
};

}  // namespace

json tolerances_to_json(const Tolerances& t) {
  json j;
  for (const TolField& f : kTolFields) j[f.name] = t.*(f.member);
  return j;
}

void apply_tolerance_overrides(Tolerances& t, const json& overrides) {
  if (!overrides.is_object())
    throw Error(errc::malformed_spec, "tolerances: expected an object");
  for (const auto& [key, value] : overrides.items()) {
    bool known = false;
    for (const TolField& f : kTolFields) {
      if (key != f.name) continue;
      known = true;
      if (!value.is_number() || !(value.get<double>() > 0.0))
        throw Error(errc::malformed_spec,
                    "tolerances: '" + key + "' must be a positive number");
      t.*(f.member) = value.get<double>();
    }
    if (!known)
      throw Error(errc::malformed_spec, "tolerances: unknown key '" + key + "'");
  }
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object())
    throw Error(errc::malformed_spec, "config: expected a JSON object");
  RunConfig cfg;
  if (!doc.contains("metric"))
    throw Error(errc::malformed_spec, "config: missing 'metric'");
  cfg.metric = spec_from_json(doc["metric"]);

  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    if (!g.is_object())
      throw Error(errc::malformed_spec, "config: 'grid' must be an object");
    cfg.grid.profile_size = g.value("profile_size", cfg.grid.profile_size);
    cfg.grid.curvature_size = g.value("curvature_size", cfg.grid.curvature_size);
  }
  if (cfg.grid.profile_size < 128)
    throw Error(errc::malformed_spec, "config: grid.profile_size >= 128");
  if (cfg.grid.curvature_size < 64)
    throw Error(errc::malformed_spec, "config: grid.curvature_size >= 64");

  if (doc.contains("tolerances"))
    apply_tolerance_overrides(cfg.tolerances, doc["tolerances"]);

  if (doc.contains("fit_window")) {
    const auto& w = doc["fit_window"];
    if (!w.is_object())
      throw Error(errc::malformed_spec, "config: 'fit_window' must be an object");
    cfg.fit_window.r_min_factor = w.value("r_min_factor", cfg.fit_window.r_min_factor);
    cfg.fit_window.r_max_factor = w.value("r_max_factor", cfg.fit_window.r_max_factor);
    cfg.fit_window.samples = w.value("samples", cfg.fit_window.samples);
  }
  if (!(cfg.fit_window.r_min_factor > 0.0) ||
      !(cfg.fit_window.r_max_factor > cfg.fit_window.r_min_factor) ||
      cfg.fit_window.r_max_factor > 0.3)
    throw Error(errc::malformed_spec,
                "config: fit_window needs 0 < r_min_factor < r_max_factor <= 0.3");
  if (cfg.fit_window.samples < 20)
    throw Error(errc::malformed_spec, "config: fit_window.samples >= 20");

  cfg.output_dir = doc.value("output_dir", cfg.output_dir);
  if (cfg.output_dir.empty())
    throw Error(errc::malformed_spec, "config: output_dir must not be empty");
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["metric"] = spec_to_json(cfg.metric);
  j["grid"] = {{"profile_size", cfg.grid.profile_size},
               {"curvature_size", cfg.grid.curvature_size}};
  j["tolerances"] = tolerances_to_json(cfg.tolerances);
  j["fit_window"] = {{"r_min_factor", cfg.fit_window.r_min_factor},
                     {"r_max_factor", cfg.fit_window.r_max_factor},
                     {"samples", cfg.fit_window.samples}};
  j["output_dir"] = cfg.output_dir;
  return j;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(errc::malformed_spec, "config: cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(errc::malformed_spec, std::string("config: parse error: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace isolab
