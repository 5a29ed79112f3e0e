#include "aerobat/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "aerobat/angles.hpp"
#include "aerobat/errors.hpp"
#include "aerobat/kinematics/optimizer.hpp"
#include "aerobat/sim/scenarios.hpp"
#include "aerobat/sim/trajectory_log.hpp"

namespace aerobat::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Maps an escaping exception to an exit code and prints it.
int exit_code_for(std::exception_ptr ep, std::ostream& err) {
  try {
    std::rethrow_exception(ep);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NoFeasibleStart& e) {
    err << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const AssemblyError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const NumericalBlowup& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const IllConditioned& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    // Remaining domain errors come from a model the configuration describes.
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

void write_manifest(const fs::path& dir, const std::string& command, const CommonOptions& opts,
                    const config::Config& c, int status, double wall_time,
                    const std::string& summary) {
  ordered_json m;
  m["command"] = command;
  m["version"] = sim::kVersion;
  m["config_path"] = opts.config_path ? opts.config_path->string() : "";
  m["config_hash"] = config::hash(c);
  m["config_snapshot"] = "config.ini";
  m["output_dir"] = dir.string();
  m["exit_status"] = status;
  m["wall_time_s"] = wall_time;
  m["summary"] = summary;
  sim::write_file_atomic(dir / "config.ini", config::dump(c));
  sim::write_file_atomic(dir / "manifest.json", m.dump(2) + "\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ordered_json design_json(const kinematics::LinkageDesign& d) {
  ordered_json j;
  j["humerus_length"] = d.humerus_length;
  j["radius_length"] = d.radius_length;
  j["crank_radius_shoulder"] = d.crank_radius_shoulder;
  j["crank_radius_elbow"] = d.crank_radius_elbow;
  j["shoulder_coupler"] = d.coupler_lengths.shoulder_coupler;
  j["shoulder_lever"] = d.coupler_lengths.shoulder_lever;
  j["elbow_coupler"] = d.coupler_lengths.elbow_coupler;
  j["elbow_lever"] = d.coupler_lengths.elbow_lever;
  j["shoulder_crank"] = {d.ground_pivot_positions.shoulder_crank.x(), d.ground_pivot_positions.shoulder_crank.y()};
  j["elbow_crank"] = {d.ground_pivot_positions.elbow_crank.x(), d.ground_pivot_positions.elbow_crank.y()};
  j["shoulder_lever_angle"] = d.shoulder_lever_angle;
  j["elbow_lever_angle"] = d.elbow_lever_angle;
  j["crank_phase"] = d.crank_phase;
  j["phase_offset"] = d.phase_offset;
  j["gear_ratio"] = d.gear_ratio;
  return j;
}

struct ScenarioOutcome {
  int code = kOk;
  std::string message;
};

ScenarioOutcome run_one(sim::Scenario s, const config::Config& c, const CommonOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = opts.out_dir / std::string(sim::to_string(s));
  fs::create_directories(dir);
  ScenarioOutcome o;
  std::ostringstream err;
  std::string summary;
  try {
    const auto r = sim::run_scenario(s, c);
    for (const auto& [stem, log] : r.logs) log.write_csv(dir / (stem + ".csv"));
    ordered_json metrics = ordered_json::parse(r.metrics.to_json());
    metrics["scenario"] = r.scenario;
    metrics["passed"] = r.passed;
    metrics["config_hash"] = config::hash(c);
    if (r.failure) metrics["failure"] = *r.failure;
    sim::write_file_atomic(dir / "metrics.json", metrics.dump(2) + "\n");
    summary = r.summary;
    o.code = r.failure ? kNumerical : (r.passed ? kOk : kThresholdsNotMet);
    o.message = r.summary + (o.code == kThresholdsNotMet ? " [thresholds not met]" : "") + "\n";
  } catch (...) {
    o.code = exit_code_for(std::current_exception(), err);
    o.message = std::string(sim::to_string(s)) + ": " + err.str();
    summary = err.str();
  }
  write_manifest(dir, "simulate " + std::string(sim::to_string(s)), opts, c, o.code,
                 seconds_since(t0), summary);
  return o;
}

}  // namespace

config::Config resolve_config(const CommonOptions& opts) {
  config::Config c = opts.config_path ? config::load(*opts.config_path) : config::Config{};
  config::apply_env_overrides(c);
  if (opts.seed) {
    c.sim.seed = *opts.seed;
    c.kinematics.optimizer.seed = *opts.seed;
  } else {
    c.kinematics.optimizer.seed = c.sim.seed;
  }
  if (opts.jobs) c.kinematics.optimizer.jobs = *opts.jobs;
  if (opts.mode) {
    if (*opts.mode == "classical") c.aero.params.wagner.form = aero::WagnerForm::Classical;
    else if (*opts.mode == "paper-literal") c.aero.params.wagner.form = aero::WagnerForm::PaperLiteral;
    else throw ConfigError("--mode", 0, "expected classical or paper-literal, got '" + *opts.mode + "'");
  }
  c.validate();
  return c;
}

int cmd_linkage_optimize(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  config::Config c;
  try {
    c = resolve_config(opts);
  } catch (...) {
    return exit_code_for(std::current_exception(), err);
  }
  const fs::path dir = opts.out_dir / "linkage-optimize";
  fs::create_directories(dir);

  int code = kOk;
  std::string summary;
  try {
    const auto& k = c.kinematics;
    const auto targets = kinematics::sample_target_gait(k.optimizer.grid_points, k.elbow_target);
    const auto report = kinematics::optimize_linkage(k.design, targets, k.bounds, k.optimizer);
    const auto bends = kinematics::bend_angle_check(report.optimized_design, 360, k.bend_convention);

    const double elbow_max_deg = rad2deg(report.theta_e_range.hi);
    const bool ok = report.r2_shoulder >= k.min_r2_shoulder && report.r2_elbow >= k.min_r2_elbow &&
                    elbow_max_deg <= k.max_elbow_deg && bends.pass;
    code = ok ? kOk : kThresholdsNotMet;

    ordered_json j;
    j["r2_shoulder"] = report.r2_shoulder;
    j["r2_elbow"] = report.r2_elbow;
    j["theta_s_range_deg"] = {rad2deg(report.theta_s_range.lo), rad2deg(report.theta_s_range.hi)};
    j["theta_e_range_deg"] = {rad2deg(report.theta_e_range.lo), rad2deg(report.theta_e_range.hi)};
    ordered_json joints = ordered_json::array();
    for (int i = 0; i < kinematics::kJointCount; ++i) {
      ordered_json b;
      b["joint"] = "J" + std::to_string(i + 1);
      b["max_bend_deg"] = rad2deg(bends.max_bend[static_cast<std::size_t>(i)]);
      const double lim = bends.limit[static_cast<std::size_t>(i)];
      b["limit_deg"] = std::isfinite(lim) ? ordered_json(rad2deg(lim)) : ordered_json(nullptr);
      joints.push_back(b);
    }
    j["bend_angles"] = joints;
    j["joint_limits_pass"] = bends.pass;
    j["objective"] = report.objective;
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    j["feasible_starts"] = report.feasible_starts;
    j["passed"] = ok;
    j["optimized_design"] = design_json(report.optimized_design);
    j["config_hash"] = config::hash(c);
    sim::write_file_atomic(dir / "report.json", j.dump(2) + "\n");

    sim::TrajectoryLog log({"time", "phase", "theta_s", "theta_e", "theta_s_target",
                            "theta_e_target", "tip_x", "tip_y"},
                           config::hash(c));
    const auto eval = kinematics::evaluate_design(report.optimized_design, targets);
    const double f = c.dynamics.aerobat.flapping_frequency > 0 ? c.dynamics.aerobat.flapping_frequency : 1.0;
    for (std::size_t i = 0; i < eval.states.size(); ++i) {
      const auto& s = eval.states[i];
      const auto& tip = s.joint_positions[kinematics::kJointCount - 1];
      log.append({targets[i].phase / (kTwoPi * f), targets[i].phase, s.theta_s, s.theta_e,
                  targets[i].theta_s_hat, targets[i].theta_e_hat, tip.x(), tip.y()});
    }
    log.write_csv(dir / "gait.csv");

    sim::TrajectoryLog hist({"time", "objective"}, config::hash(c));
    for (std::size_t i = 0; i < report.history.size(); ++i)
      hist.append({static_cast<double>(i), report.history[i]});
    hist.write_csv(dir / "history.csv");

    std::ostringstream os;
    os.precision(4);
    os << std::fixed << "linkage-optimize: R2 shoulder " << report.r2_shoulder << ", elbow "
       << report.r2_elbow << ", elbow range [" << rad2deg(report.theta_e_range.lo) << ", "
       << elbow_max_deg << "] deg, joint limits " << (bends.pass ? "met" : "violated");
    summary = os.str();
    out << summary << (ok ? "" : " [thresholds not met]") << "\n";
  } catch (...) {
    std::ostringstream e;
    code = exit_code_for(std::current_exception(), e);
    summary = e.str();
    err << summary;
  }
  write_manifest(dir, "linkage-optimize", opts, c, code, seconds_since(t0), summary);
  return code;
}

int cmd_simulate(const std::vector<std::string>& names, const CommonOptions& opts,
                 std::ostream& out, std::ostream& err) {
  std::vector<sim::Scenario> scenarios;
  config::Config c;
  try {
    for (const auto& n : names) scenarios.push_back(sim::parse_scenario(n));
    c = resolve_config(opts);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (...) {
    return exit_code_for(std::current_exception(), err);
  }

  const std::size_t jobs = static_cast<std::size_t>(std::max(1, opts.jobs.value_or(1)));
  std::vector<ScenarioOutcome> outcomes(scenarios.size());
  for (std::size_t start = 0; start < scenarios.size(); start += jobs) {
    std::vector<std::future<ScenarioOutcome>> batch;
    for (std::size_t i = start; i < std::min(scenarios.size(), start + jobs); ++i)
      batch.push_back(std::async(std::launch::async, run_one, scenarios[i], std::cref(c), std::cref(opts)));
    for (std::size_t i = 0; i < batch.size(); ++i) outcomes[start + i] = batch[i].get();
  }

  int code = kOk;
  for (const auto& o : outcomes) {
    (o.code == kOk || o.code == kThresholdsNotMet ? out : err) << o.message;
    code = std::max(code, o.code);
  }
  return code;
}

int cmd_config_reference(const std::optional<fs::path>& path, std::ostream& out) {
  const std::string text = config::reference_markdown();
  if (path) sim::write_file_atomic(*path, text);
  else out << text;
  return kOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Guarded flapping-wing MAV simulator"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string config_path, mode;
  std::uint64_t seed = 0;
  int jobs = 1;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "random seed (overrides sim.seed)");
    sub->add_option("--jobs", jobs, "parallel jobs")->check(CLI::PositiveNumber);
    sub->add_option("--mode", mode, "aero variant")->check(CLI::IsMember({"classical", "paper-literal"}));
  };

  auto* optimize = app.add_subcommand("linkage-optimize", "optimize the armwing linkage");
  add_common(optimize);

  std::vector<std::string> scenarios;
  auto* simulate = app.add_subcommand("simulate", "run one or more scenarios");
  add_common(simulate);
  simulate->add_option("--scenario", scenarios, "hover, wingtip-trace, aero-step, observer-demo, free-flight")
      ->required()
      ->delimiter(',');

  std::string reference_path;
  auto* reference = app.add_subcommand("config-reference", "print the configuration reference");
  reference->add_option("--out", reference_path, "write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  auto finish_common = [&](CLI::App* sub) {
    if (!config_path.empty()) opts.config_path = config_path;
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--jobs")) opts.jobs = jobs;
    if (!mode.empty()) opts.mode = mode;
  };
  if (*optimize) {
    finish_common(optimize);
    return cmd_linkage_optimize(opts, std::cout, std::cerr);
  }
  if (*simulate) {
    finish_common(simulate);
    return cmd_simulate(scenarios, opts, std::cout, std::cerr);
  }
  return cmd_config_reference(reference_path.empty() ? std::nullopt
                                                     : std::optional<fs::path>(reference_path),
                              std::cout);
}

}  // namespace aerobat::cli
