#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "isolab/pipeline.hpp"

namespace {

const char* const kCommands[] = {"curvature", "profile",      "hawking",
                                 "rigidity",  "expansion",    "inequalities",
                                 "double",    "cmc",          "full-report"};

const char* const kDescriptions[] = {
    "curvature grid and hypothesis report",
    "candidate isoperimetric profile table",
    "adapted Hawking mass table and monotonicity check",
    "full rigidity pipeline with a verdict document",
    "geodesic-ball volume expansion: analytic and fitted coefficients",
    "stability/comparison inequality ledger on coordinate spheres",
    "reflect a totally geodesic boundary into the closed double",
    "CMC competitor sweep against the candidate profile",
    "all artifacts, including the doubling path for boundary metrics"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isolab: isoperimetric-profile laboratory for rotationally "
               "symmetric 3-manifolds"};
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::string seed_tolerances;
  int grid = 0;
  bool serial = false;

  app.add_option("--config", config_path, "configuration JSON document");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--grid", grid, "override profile and curvature grid sizes");
  app.add_option("--seed-tolerances", seed_tolerances,
                 "JSON document with tolerance overrides");
  app.add_flag("--serial", serial, "run kernels on the serial reference path");

  for (std::size_t i = 0; i < std::size(kCommands); ++i)
    app.add_subcommand(kCommands[i], kDescriptions[i]);
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : int(isolab::ExitCode::malformed_config);
  }

  try {
    isolab::RunConfig config;
    if (!config_path.empty()) {
      config = isolab::load_config_file(config_path);
    } else {
      config.metric = isolab::WarpingSpec::round();
    }
    if (!seed_tolerances.empty()) {
      std::ifstream in(seed_tolerances);
      if (!in)
        throw isolab::Error(isolab::errc::malformed_spec,
                            "cannot open tolerance file " + seed_tolerances);
      nlohmann::json doc;
      in >> doc;
      isolab::apply_tolerance_overrides(config.tolerances, doc);
    }
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (grid != 0) {
      if (grid < 128)
        throw isolab::Error(isolab::errc::malformed_spec, "--grid must be >= 128");
      config.grid.profile_size = grid;
      config.grid.curvature_size = grid;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    return isolab::run_command(command, config,
                               serial ? isolab::Exec::serial
                                      : isolab::Exec::parallel);
  } catch (const isolab::Error& e) {
    std::cerr << isolab::errc_name(e.code()) << ": " << e.what() << "\n";
    return e.code() == isolab::errc::malformed_spec
               ? int(isolab::ExitCode::malformed_config)
               : int(isolab::ExitCode::numerical_failure);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(isolab::ExitCode::malformed_config);
  }
}
