#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aerobat/config/config.hpp"
#include "aerobat/dynamics/coupled.hpp"
#include "aerobat/sim/metrics.hpp"
#include "aerobat/sim/trajectory_log.hpp"

namespace aerobat::sim {

enum class Scenario { Hover, WingtipTrace, AeroStep, ObserverDemo, FreeFlight };

const std::vector<std::string>& scenario_names();
// Throws std::invalid_argument listing the valid names.
Scenario parse_scenario(std::string_view name);
std::string_view to_string(Scenario s);

struct ScenarioResult {
  std::string scenario;
  // File stem -> table; the first entry is the main trajectory.
  std::vector<std::pair<std::string, TrajectoryLog>> logs;
  Metrics metrics;
  bool passed = false;
  std::string summary;
  // Set when the run stopped early on divergence; logs hold the samples so far.
  std::optional<std::string> failure;
};

// Models assembled from the configuration.
dynamics::CoupledModels build_models(const config::Config& c);

// Guard at the origin, Aerobat hanging at band equilibrium, wings at rest.
dynamics::CoupledState initial_state(const dynamics::CoupledModels& models);

ScenarioResult run_hover(const config::Config& c);
ScenarioResult run_free_flight(const config::Config& c);
ScenarioResult run_wingtip_trace(const config::Config& c);
ScenarioResult run_aero_step(const config::Config& c);
ScenarioResult run_observer_demo(const config::Config& c);
ScenarioResult run_scenario(Scenario s, const config::Config& c);

}  // namespace aerobat::sim
