#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "aerobat/aero/strip_model.hpp"
#include "aerobat/control/control_law.hpp"
#include "aerobat/dynamics/aerobat_rom.hpp"
#include "aerobat/dynamics/guard.hpp"
#include "aerobat/dynamics/suspension.hpp"
#include "aerobat/kinematics/optimizer.hpp"
#include "aerobat/sim/integrator.hpp"

namespace aerobat::config {

enum class GaitSource { Target, Linkage };

struct KinematicsConfig {
  kinematics::LinkageDesign design;
  kinematics::ElbowTargetForm elbow_target = kinematics::ElbowTargetForm::Normalized;
  kinematics::OptimizerOptions optimizer;
  kinematics::DesignBounds bounds = kinematics::DesignBounds::defaults();
  kinematics::BendConvention bend_convention = kinematics::BendConvention::FromNeutral;
  double min_r2_shoulder = 0.99;
  double min_r2_elbow = 0.90;
  double max_elbow_deg = 180.0;
};

struct AeroConfig {
  bool enabled = true;
  int strips = 8;
  double half_span = 0.15;
  double root_chord = 0.06;
  double tip_ratio = 0.5;
  aero::AeroParams params;
};

struct DynamicsConfig {
  dynamics::GuardGeometry guard;
  dynamics::AerobatParams aerobat;
  double band_stiffness = 45.0;
  double band_damping = 0.1;
  double band_pretension_upper = 0.006;  // m of stretch at the neutral pose
  double band_pretension_lower = 0.003;
  double gravity = dynamics::kGravity;
  GaitSource gait_source = GaitSource::Target;
  int gait_harmonics = 12;
};

struct ControlConfig {
  control::ControlLaw law;
  double observer_pole = -15.0;       // rad/s, triple pole per axis
  double measurement_noise = 0.0;     // std dev on x1 (m, rad)
  bool motors_enabled = true;
};

struct SimConfig {
  double dt = 2.5e-4;
  double duration = 10.0;
  sim::Integrator integrator = sim::Integrator::Rk4;
  double transient = 2.0;
  int log_every = 20;
  std::uint64_t seed = 1;
  // Wingtip trace.
  int wingtip_cycles = 3;
  int wingtip_samples = 360;
  double phase_jitter = 0.0;
  double wingspan = 0.30;
  // Aero step / oracle comparison.
  double aero_dt = 1e-4;
  double aero_duration = 0.5;
  double aero_frequency = 8.0;
  double aero_amplitude = 0.2;
  // Pass thresholds.
  double max_rms_position = 0.02;
  double max_rms_attitude_deg = 5.0;
  double max_wingtip_deviation = 0.05;
  double max_aero_rms_error = 0.01;
  double observer_disturbance = 0.05;  // N, constant force in the observer demo
};

struct Config {
  KinematicsConfig kinematics;
  AeroConfig aero;
  DynamicsConfig dynamics;
  ControlConfig control;
  SimConfig sim;

  // Checks cross-field invariants; throws ConfigError naming the key.
  void validate() const;

  aero::WingGeometry wing_geometry() const;
  dynamics::GuardParams guard_params() const;
  dynamics::SuspensionParams suspension_params() const;
};

// One documented, settable key.
struct Entry {
  std::string key;
  std::string description;
  std::function<void(Config&, const std::string&)> set;  // throws std::invalid_argument
  std::function<std::string(const Config&)> get;
};

const std::vector<Entry>& registry();

// Parses "key = value" lines grouped under optional [section] headers; a key
// inside [sim] may be written as "dt" or "sim.dt". '#' and ';' start comments.
// Throws ConfigError with the offending key and line.
Config parse(const std::string& text, Config base = {});
Config load(const std::filesystem::path& path);

// Applies AEROBAT_<KEY> environment overrides, where KEY is the dotted key
// upper-cased with '.' written as "__" and '-' as '_'
// (AEROBAT_SIM__DT overrides sim.dt).
void apply_env_overrides(Config& config);
std::string env_name(const std::string& key);

// Every key with its current value, in registry order, as parseable text.
std::string dump(const Config& config);
// Stable FNV-1a hash of dump(config), hex encoded.
std::string hash(const Config& config);
// Markdown table of all keys, defaults and descriptions.
std::string reference_markdown();

// Diagnostic: true when the motors alone can lift guard + Aerobat.
bool motors_can_lift(const Config& config);

}  // namespace aerobat::config
