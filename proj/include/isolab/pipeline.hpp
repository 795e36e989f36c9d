#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "isolab/cmc.hpp"
#include "isolab/config.hpp"
#include "isolab/expansion.hpp"
#include "isolab/geodesic_balls.hpp"
#include "isolab/hawking.hpp"
#include "isolab/metric.hpp"

namespace isolab {

// Exit-code contract of the command runner.
enum class ExitCode : int {
  ok = 0,
  hypothesis_violation = 1,
  numerical_failure = 2,
  malformed_config = 3,
};

// The full logical chain behind the `rigidity` verdict; each step is an
// individually recorded check.
struct RigidityOutcome {
  bool doubled = false;
  WarpedMetric metric;  // the closed metric that was analyzed
  HypothesisReport hypotheses;
  bool hypotheses_ok = false;
  ProfileTable profile;
  HawkingTable hawking;
  MonotonicityVerdict monotonicity;
  MaxAreaReport max_area;
  bool rigid = false;
  std::optional<ScalarBoundReport> scalar_north, scalar_south;
  std::optional<RicciBoundReport> ricci_north, ricci_south;
  std::string verdict;
};

// Builds (and, for boundary metrics, doubles) the metric described by the
// config. Used by every command.
WarpedMetric prepare_metric(const RunConfig& config, bool* doubled = nullptr);

RigidityOutcome run_rigidity_pipeline(const RunConfig& config,
                                      Exec exec = Exec::parallel);

nlohmann::json rigidity_verdict_json(const RigidityOutcome& outcome);

// Dispatches one CLI command, writing its artifacts under
// config.output_dir. Returns the process exit code.
int run_command(const std::string& command, const RunConfig& config,
                Exec exec = Exec::parallel);

}  // namespace isolab
