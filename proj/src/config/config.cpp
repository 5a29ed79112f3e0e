#include "aerobat/config/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aerobat/errors.hpp"

namespace aerobat::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v) {
  double x = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(x))
    throw std::invalid_argument("expected a number, got '" + v + "'");
  return x;
}

long long parse_integer(const std::string& v) {
  long long x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw std::invalid_argument("expected an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + v + "'");
}

std::string format_double(double v) {
  // Shortest text that parses back to the same double.
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Accessors return a mutable reference; `get` casts const away to reuse them.
template <typename T>
using Access = std::function<T&(Config&)>;

Entry real(std::string key, std::string desc, Access<double> at) {
  return {std::move(key), std::move(desc),
          [at](Config& c, const std::string& v) { at(c) = parse_double(v); },
          [at](const Config& c) { return format_double(at(const_cast<Config&>(c))); }};
}

Entry integer(std::string key, std::string desc, Access<int> at) {
  return {std::move(key), std::move(desc),
          [at](Config& c, const std::string& v) { at(c) = static_cast<int>(parse_integer(v)); },
          [at](const Config& c) { return std::to_string(at(const_cast<Config&>(c))); }};
}

Entry seed(std::string key, std::string desc, Access<std::uint64_t> at) {
  return {std::move(key), std::move(desc),
          [at](Config& c, const std::string& v) {
            const long long x = parse_integer(v);
            if (x < 0) throw std::invalid_argument("seed must be non-negative");
            at(c) = static_cast<std::uint64_t>(x);
          },
          [at](const Config& c) { return std::to_string(at(const_cast<Config&>(c))); }};
}

Entry flag(std::string key, std::string desc, Access<bool> at) {
  return {std::move(key), std::move(desc),
          [at](Config& c, const std::string& v) { at(c) = parse_bool(v); },
          [at](const Config& c) { return std::string(at(const_cast<Config&>(c)) ? "true" : "false"); }};
}

template <typename E>
Entry choice(std::string key, std::string desc, Access<E> at,
             std::vector<std::pair<std::string, E>> names) {
  std::string options;
  for (const auto& [n, _] : names) options += (options.empty() ? "" : ", ") + n;
  desc += " (" + options + ")";
  return {std::move(key), std::move(desc),
          [at, names, options](Config& c, const std::string& v) {
            for (const auto& [n, e] : names)
              if (n == v) {
                at(c) = e;
                return;
              }
            throw std::invalid_argument("expected one of " + options + ", got '" + v + "'");
          },
          [at, names](const Config& c) {
            const E e = at(const_cast<Config&>(c));
            for (const auto& [n, x] : names)
              if (x == e) return n;
            return std::string("?");
          }};
}

// Applies one value to three axes; reads back the first.
Entry axes3(std::string key, std::string desc, std::function<Eigen::Ref<Eigen::Vector3d>(Config&)> at) {
  return {std::move(key), std::move(desc),
          [at](Config& c, const std::string& v) { at(c).setConstant(parse_double(v)); },
          [at](const Config& c) { return format_double(at(const_cast<Config&>(c))[0]); }};
}

std::vector<Entry> build_registry() {
  using kinematics::BendConvention;
  using kinematics::ElbowTargetForm;
  std::vector<Entry> r;
  // kinematics
  r.push_back(real("kinematics.humerus_length", "humerus (proximal) link length, m",
                   [](Config& c) -> double& { return c.kinematics.design.humerus_length; }));
  r.push_back(real("kinematics.radius_length", "radius (distal) link length, m",
                   [](Config& c) -> double& { return c.kinematics.design.radius_length; }));
  r.push_back(real("kinematics.crank_radius_shoulder", "shoulder crank radius, m",
                   [](Config& c) -> double& { return c.kinematics.design.crank_radius_shoulder; }));
  r.push_back(real("kinematics.crank_radius_elbow", "elbow crank radius, m",
                   [](Config& c) -> double& { return c.kinematics.design.crank_radius_elbow; }));
  r.push_back(real("kinematics.shoulder_coupler", "shoulder coupler length, m",
                   [](Config& c) -> double& { return c.kinematics.design.coupler_lengths.shoulder_coupler; }));
  r.push_back(real("kinematics.shoulder_lever", "shoulder lever length, m",
                   [](Config& c) -> double& { return c.kinematics.design.coupler_lengths.shoulder_lever; }));
  r.push_back(real("kinematics.elbow_coupler", "elbow coupler length, m",
                   [](Config& c) -> double& { return c.kinematics.design.coupler_lengths.elbow_coupler; }));
  r.push_back(real("kinematics.elbow_lever", "elbow lever length, m",
                   [](Config& c) -> double& { return c.kinematics.design.coupler_lengths.elbow_lever; }));
  r.push_back(real("kinematics.shoulder_crank_x", "shoulder crank pivot x, m",
                   [](Config& c) -> double& { return c.kinematics.design.ground_pivot_positions.shoulder_crank.x(); }));
  r.push_back(real("kinematics.shoulder_crank_y", "shoulder crank pivot y, m",
                   [](Config& c) -> double& { return c.kinematics.design.ground_pivot_positions.shoulder_crank.y(); }));
  r.push_back(real("kinematics.elbow_crank_x", "elbow crank pivot x, m",
                   [](Config& c) -> double& { return c.kinematics.design.ground_pivot_positions.elbow_crank.x(); }));
  r.push_back(real("kinematics.elbow_crank_y", "elbow crank pivot y, m",
                   [](Config& c) -> double& { return c.kinematics.design.ground_pivot_positions.elbow_crank.y(); }));
  r.push_back(real("kinematics.shoulder_lever_angle", "shoulder lever angle from the humerus, rad",
                   [](Config& c) -> double& { return c.kinematics.design.shoulder_lever_angle; }));
  r.push_back(real("kinematics.elbow_lever_angle", "elbow lever angle from the radius extension, rad",
                   [](Config& c) -> double& { return c.kinematics.design.elbow_lever_angle; }));
  r.push_back(real("kinematics.crank_phase", "shoulder crank angle at zero phase, rad",
                   [](Config& c) -> double& { return c.kinematics.design.crank_phase; }));
  r.push_back(real("kinematics.phase_offset", "elbow crank lead over the shoulder crank, rad",
                   [](Config& c) -> double& { return c.kinematics.design.phase_offset; }));
  r.push_back(real("kinematics.gear_ratio", "motor turns per crank turn",
                   [](Config& c) -> double& { return c.kinematics.design.gear_ratio; }));
  r.push_back(choice<ElbowTargetForm>("kinematics.elbow_target", "elbow target formula",
                                      [](Config& c) -> ElbowTargetForm& { return c.kinematics.elbow_target; },
                                      {{"normalized", ElbowTargetForm::Normalized},
                                       {"literal", ElbowTargetForm::Literal}}));
  r.push_back(choice<BendConvention>("kinematics.bend_convention", "how hinge bend is measured",
                                     [](Config& c) -> BendConvention& { return c.kinematics.bend_convention; },
                                     {{"from-neutral", BendConvention::FromNeutral},
                                      {"from-straight", BendConvention::FromStraight}}));
  r.push_back(integer("kinematics.optimizer.grid_points", "phase samples per objective evaluation",
                      [](Config& c) -> int& { return c.kinematics.optimizer.grid_points; }));
  r.push_back(integer("kinematics.optimizer.starts", "simplex multi-starts",
                      [](Config& c) -> int& { return c.kinematics.optimizer.starts; }));
  r.push_back(integer("kinematics.optimizer.evaluations_per_start", "objective evaluations per start",
                      [](Config& c) -> int& { return c.kinematics.optimizer.evaluations_per_start; }));
  r.push_back(real("kinematics.optimizer.start_spread", "random start spread, fraction of box width",
                   [](Config& c) -> double& { return c.kinematics.optimizer.start_spread; }));
  r.push_back(flag("kinematics.optimizer.penalize_bend", "penalize hinge bend-limit violations",
                   [](Config& c) -> bool& { return c.kinematics.optimizer.penalize_bend; }));
  r.push_back(integer("kinematics.optimizer.jobs", "parallel optimizer starts",
                      [](Config& c) -> int& { return c.kinematics.optimizer.jobs; }));
  static const char* kBoundNames[kinematics::kDesignParameterCount] = {
      "crank_radius_shoulder", "crank_radius_elbow", "shoulder_coupler", "shoulder_lever",
      "elbow_coupler", "elbow_lever", "shoulder_crank_x", "shoulder_crank_y", "elbow_crank_x",
      "elbow_crank_y", "shoulder_lever_angle", "elbow_lever_angle", "crank_phase", "phase_offset"};
  for (int i = 0; i < kinematics::kDesignParameterCount; ++i) {
    const std::string name = kBoundNames[i];
    r.push_back(real("kinematics.bounds." + name + ".min", "optimizer lower bound on " + name,
                     [i](Config& c) -> double& { return c.kinematics.bounds.lower[i]; }));
    r.push_back(real("kinematics.bounds." + name + ".max", "optimizer upper bound on " + name,
                     [i](Config& c) -> double& { return c.kinematics.bounds.upper[i]; }));
  }
  r.push_back(real("kinematics.min_r2_shoulder", "pass threshold on shoulder R^2",
                   [](Config& c) -> double& { return c.kinematics.min_r2_shoulder; }));
  r.push_back(real("kinematics.min_r2_elbow", "pass threshold on elbow R^2",
                   [](Config& c) -> double& { return c.kinematics.min_r2_elbow; }));
  r.push_back(real("kinematics.max_elbow_deg", "largest accepted elbow angle, deg",
                   [](Config& c) -> double& { return c.kinematics.max_elbow_deg; }));
  // aero
  r.push_back(flag("aero.enabled", "simulate wing aerodynamics",
                   [](Config& c) -> bool& { return c.aero.enabled; }));
  r.push_back(integer("aero.strips", "strips per wing",
                      [](Config& c) -> int& { return c.aero.strips; }));
  r.push_back(integer("aero.fourier_terms", "circulation sine terms",
                      [](Config& c) -> int& { return c.aero.params.fourier_terms; }));
  r.push_back(real("aero.half_span", "aerodynamic half span, m",
                   [](Config& c) -> double& { return c.aero.half_span; }));
  r.push_back(real("aero.root_chord", "chord at the root, m",
                   [](Config& c) -> double& { return c.aero.root_chord; }));
  r.push_back(real("aero.tip_ratio", "tip chord over root chord",
                   [](Config& c) -> double& { return c.aero.tip_ratio; }));
  r.push_back(choice<aero::WagnerForm>("aero.mode", "indicial response form",
                                       [](Config& c) -> aero::WagnerForm& { return c.aero.params.wagner.form; },
                                       {{"classical", aero::WagnerForm::Classical},
                                        {"paper-literal", aero::WagnerForm::PaperLiteral}}));
  r.push_back(choice<aero::LagRealization>("aero.lag", "lag-state realization",
                                           [](Config& c) -> aero::LagRealization& { return c.aero.params.lag; },
                                           {{"exact", aero::LagRealization::Exact},
                                            {"doubled-rate", aero::LagRealization::DoubledRate}}));
  r.push_back(real("aero.wagner.psi1", "first indicial coefficient",
                   [](Config& c) -> double& { return c.aero.params.wagner.psi[0]; }));
  r.push_back(real("aero.wagner.psi2", "second indicial coefficient",
                   [](Config& c) -> double& { return c.aero.params.wagner.psi[1]; }));
  r.push_back(real("aero.wagner.eps1", "first indicial rate",
                   [](Config& c) -> double& { return c.aero.params.wagner.eps[0]; }));
  r.push_back(real("aero.wagner.eps2", "second indicial rate",
                   [](Config& c) -> double& { return c.aero.params.wagner.eps[1]; }));
  r.push_back(real("aero.air_density", "kg/m^3",
                   [](Config& c) -> double& { return c.aero.params.air_density; }));
  r.push_back(real("aero.reference_speed", "speed scaling kinematics and time, m/s",
                   [](Config& c) -> double& { return c.aero.params.reference_speed; }));
  r.push_back(real("aero.profile_drag", "strip drag coefficient",
                   [](Config& c) -> double& { return c.aero.params.profile_drag; }));
  // dynamics
  r.push_back(real("dynamics.guard.semi_axis_x", "guard loop semi-axis x, m",
                   [](Config& c) -> double& { return c.dynamics.guard.semi_axis_x; }));
  r.push_back(real("dynamics.guard.semi_axis_y", "guard loop semi-axis y (major), m",
                   [](Config& c) -> double& { return c.dynamics.guard.semi_axis_y; }));
  r.push_back(real("dynamics.guard.semi_axis_z", "guard loop semi-axis z, m",
                   [](Config& c) -> double& { return c.dynamics.guard.semi_axis_z; }));
  r.push_back(real("dynamics.guard.rod_mass", "all carbon loops, kg",
                   [](Config& c) -> double& { return c.dynamics.guard.rod_mass; }));
  r.push_back(real("dynamics.guard.electronics_mass", "flight electronics at the centre, kg",
                   [](Config& c) -> double& { return c.dynamics.guard.electronics_mass; }));
  r.push_back(real("dynamics.guard.motor_mass", "per motor, kg",
                   [](Config& c) -> double& { return c.dynamics.guard.motor_mass; }));
  r.push_back(real("dynamics.guard.arm_x", "roll arm, m",
                   [](Config& c) -> double& { return c.dynamics.guard.arm_x; }));
  r.push_back(real("dynamics.guard.arm_y", "pitch arm, m",
                   [](Config& c) -> double& { return c.dynamics.guard.arm_y; }));
  r.push_back(real("dynamics.guard.arm_z", "yaw arm, m",
                   [](Config& c) -> double& { return c.dynamics.guard.arm_z; }));
  r.push_back(real("dynamics.aerobat.body_mass", "kg",
                   [](Config& c) -> double& { return c.dynamics.aerobat.body_mass; }));
  r.push_back(real("dynamics.aerobat.proximal_mass", "per wing, kg",
                   [](Config& c) -> double& { return c.dynamics.aerobat.proximal_mass; }));
  r.push_back(real("dynamics.aerobat.distal_mass", "per wing, kg",
                   [](Config& c) -> double& { return c.dynamics.aerobat.distal_mass; }));
  r.push_back(real("dynamics.aerobat.shoulder_offset", "lateral shoulder offset, m",
                   [](Config& c) -> double& { return c.dynamics.aerobat.shoulder_offset; }));
  r.push_back(real("dynamics.aerobat.body_inertia_x", "body principal inertia about x, kg m^2",
                   [](Config& c) -> double& { return c.dynamics.aerobat.body_inertia[0]; }));
  r.push_back(real("dynamics.aerobat.body_inertia_y", "body principal inertia about y, kg m^2",
                   [](Config& c) -> double& { return c.dynamics.aerobat.body_inertia[1]; }));
  r.push_back(real("dynamics.aerobat.body_inertia_z", "body principal inertia about z, kg m^2",
                   [](Config& c) -> double& { return c.dynamics.aerobat.body_inertia[2]; }));
  r.push_back(real("dynamics.aerobat.flapping_frequency", "Hz",
                   [](Config& c) -> double& { return c.dynamics.aerobat.flapping_frequency; }));
  r.push_back(real("dynamics.band_stiffness", "per band, N/m",
                   [](Config& c) -> double& { return c.dynamics.band_stiffness; }));
  r.push_back(real("dynamics.band_damping", "per band, N s/m",
                   [](Config& c) -> double& { return c.dynamics.band_damping; }));
  r.push_back(real("dynamics.band_pretension_upper", "upper band stretch at the neutral pose, m",
                   [](Config& c) -> double& { return c.dynamics.band_pretension_upper; }));
  r.push_back(real("dynamics.band_pretension_lower", "lower band stretch at the neutral pose, m",
                   [](Config& c) -> double& { return c.dynamics.band_pretension_lower; }));
  r.push_back(real("dynamics.gravity", "m/s^2",
                   [](Config& c) -> double& { return c.dynamics.gravity; }));
  r.push_back(choice<GaitSource>("dynamics.gait_source", "wing gait in the coupled model",
                                 [](Config& c) -> GaitSource& { return c.dynamics.gait_source; },
                                 {{"target", GaitSource::Target}, {"linkage", GaitSource::Linkage}}));
  r.push_back(integer("dynamics.gait_harmonics", "Fourier harmonics of the gait schedule",
                      [](Config& c) -> int& { return c.dynamics.gait_harmonics; }));
  // control
  r.push_back(axes3("control.kp_position", "position gain, 1/s^2",
                   [](Config& c) -> Eigen::Ref<Eigen::Vector3d> { return c.control.law.kp.head<3>(); }));
  r.push_back(axes3("control.kd_position", "velocity gain, 1/s",
                   [](Config& c) -> Eigen::Ref<Eigen::Vector3d> { return c.control.law.kd.head<3>(); }));
  r.push_back(axes3("control.kp_attitude", "attitude gain, 1/s^2",
                   [](Config& c) -> Eigen::Ref<Eigen::Vector3d> { return c.control.law.kp.tail<3>(); }));
  r.push_back(axes3("control.kd_attitude", "attitude rate gain, 1/s",
                   [](Config& c) -> Eigen::Ref<Eigen::Vector3d> { return c.control.law.kd.tail<3>(); }));
  r.push_back(choice<control::FeedbackMode>(
      "control.mode", "state feedback",
      [](Config& c) -> control::FeedbackMode& { return c.control.law.mode; },
      {{"pose", control::FeedbackMode::PoseAndVelocity},
       {"velocity-only", control::FeedbackMode::VelocityOnly}}));
  r.push_back(real("control.f_max", "motor thrust limit, N",
                   [](Config& c) -> double& { return c.control.law.f_max; }));
  r.push_back(real("control.max_tilt", "roll/pitch command limit, rad",
                   [](Config& c) -> double& { return c.control.law.max_tilt; }));
  r.push_back(flag("control.cancel_disturbance", "feed the estimated disturbance forward",
                   [](Config& c) -> bool& { return c.control.law.cancel_disturbance; }));
  r.push_back(real("control.observer_pole", "observer triple pole, rad/s (negative)",
                   [](Config& c) -> double& { return c.control.observer_pole; }));
  r.push_back(real("control.measurement_noise", "pose measurement noise std dev (m, rad)",
                   [](Config& c) -> double& { return c.control.measurement_noise; }));
  r.push_back(flag("control.motors_enabled", "run the guard motors",
                   [](Config& c) -> bool& { return c.control.motors_enabled; }));
  // sim
  r.push_back(real("sim.dt", "integration step, s",
                   [](Config& c) -> double& { return c.sim.dt; }));
  r.push_back(real("sim.duration", "simulated time, s",
                   [](Config& c) -> double& { return c.sim.duration; }));
  r.push_back(choice<sim::Integrator>("sim.integrator", "time stepper",
                                      [](Config& c) -> sim::Integrator& { return c.sim.integrator; },
                                      {{"rk4", sim::Integrator::Rk4},
                                       {"semi-implicit-euler", sim::Integrator::SemiImplicitEuler}}));
  r.push_back(real("sim.transient", "start of the metric window, s",
                   [](Config& c) -> double& { return c.sim.transient; }));
  r.push_back(integer("sim.log_every", "steps between logged samples",
                      [](Config& c) -> int& { return c.sim.log_every; }));
  r.push_back(seed("sim.seed", "random seed",
                   [](Config& c) -> std::uint64_t& { return c.sim.seed; }));
  r.push_back(integer("sim.wingtip_cycles", "wingbeats in the wingtip trace",
                      [](Config& c) -> int& { return c.sim.wingtip_cycles; }));
  r.push_back(integer("sim.wingtip_samples", "samples per wingbeat in the wingtip trace",
                      [](Config& c) -> int& { return c.sim.wingtip_samples; }));
  r.push_back(real("sim.phase_jitter", "relative phase jitter of the wingtip drive",
                   [](Config& c) -> double& { return c.sim.phase_jitter; }));
  r.push_back(real("sim.wingspan", "wingspan used to normalize wingtip deviation, m",
                   [](Config& c) -> double& { return c.sim.wingspan; }));
  r.push_back(real("sim.aero_dt", "step of the aero comparison, s",
                   [](Config& c) -> double& { return c.sim.aero_dt; }));
  r.push_back(real("sim.aero_duration", "length of the aero comparison, s",
                   [](Config& c) -> double& { return c.sim.aero_duration; }));
  r.push_back(real("sim.aero_frequency", "forcing frequency of the aero comparison, Hz",
                   [](Config& c) -> double& { return c.sim.aero_frequency; }));
  r.push_back(real("sim.aero_amplitude", "forcing amplitude of the aero comparison",
                   [](Config& c) -> double& { return c.sim.aero_amplitude; }));
  r.push_back(real("sim.max_rms_position", "hover pass threshold, m",
                   [](Config& c) -> double& { return c.sim.max_rms_position; }));
  r.push_back(real("sim.max_rms_attitude_deg", "hover pass threshold, deg",
                   [](Config& c) -> double& { return c.sim.max_rms_attitude_deg; }));
  r.push_back(real("sim.max_wingtip_deviation", "wingtip pass threshold, fraction of span",
                   [](Config& c) -> double& { return c.sim.max_wingtip_deviation; }));
  r.push_back(real("sim.max_aero_rms_error", "aero comparison pass threshold, relative RMS",
                   [](Config& c) -> double& { return c.sim.max_aero_rms_error; }));
  r.push_back(real("sim.observer_disturbance", "constant force in the observer demo, N",
                   [](Config& c) -> double& { return c.sim.observer_disturbance; }));
  return r;
}

const Entry* find(const std::string& key) {
  for (const auto& e : registry())
    if (e.key == key) return &e;
  return nullptr;
}

void set_key(Config& c, const std::string& key, const std::string& value, int line) {
  const Entry* e = find(key);
  if (!e) throw ConfigError(key, line, "unknown key");
  try {
    e->set(c, value);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(key, line, ex.what());
  }
}

}  // namespace

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = build_registry();
  return r;
}

void Config::validate() const {
  auto require = [](bool ok, const char* key, const std::string& what) {
    if (!ok) throw ConfigError(key, 0, what);
  };
  require(sim.dt > 0.0, "sim.dt", "must be positive");
  require(sim.duration >= sim.dt, "sim.duration", "must be at least one step");
  const double f = dynamics.aerobat.flapping_frequency;
  require(f >= 0.0 && f <= 8.0, "dynamics.aerobat.flapping_frequency", "must lie in [0, 8] Hz");
  require(f == 0.0 || sim.dt <= 1.0 / (100.0 * f) * (1.0 + 1e-12), "sim.dt",
          "must resolve the wingbeat with at least 100 steps");
  require(sim.transient >= 0.0 && sim.transient < sim.duration, "sim.transient",
          "must lie inside the run");
  require(sim.log_every >= 1, "sim.log_every", "must be at least 1");
  require(sim.wingtip_cycles >= 2, "sim.wingtip_cycles", "need at least two wingbeats");
  require(sim.wingtip_samples >= 8, "sim.wingtip_samples", "need at least 8 samples");
  require(sim.phase_jitter >= 0.0 && sim.phase_jitter < 1.0, "sim.phase_jitter", "must lie in [0, 1)");
  require(sim.wingspan > 0.0, "sim.wingspan", "must be positive");
  require(sim.aero_dt > 0.0 && sim.aero_duration >= sim.aero_dt, "sim.aero_dt",
          "must be positive and shorter than the comparison");
  require(aero.strips >= 1, "aero.strips", "need at least one strip");
  require(aero.params.fourier_terms >= 1, "aero.fourier_terms", "need at least one term");
  require(aero.params.reference_speed > 0.0, "aero.reference_speed", "must be positive");
  require(aero.params.air_density > 0.0, "aero.air_density", "must be positive");
  require(aero.half_span > 0.0 && aero.root_chord > 0.0 && aero.tip_ratio > 0.0, "aero.half_span",
          "wing dimensions must be positive");
  require(dynamics.band_stiffness > 0.0, "dynamics.band_stiffness", "must be positive");
  require(dynamics.band_damping >= 0.0, "dynamics.band_damping", "must be non-negative");
  require(dynamics.gravity > 0.0, "dynamics.gravity", "must be positive");
  require(dynamics.gait_harmonics >= 0, "dynamics.gait_harmonics", "must be non-negative");
  require(dynamics.aerobat.body_mass > 0.0, "dynamics.aerobat.body_mass", "must be positive");
  require(control.law.f_max > 0.0, "control.f_max", "must be positive");
  require(control.observer_pole < 0.0, "control.observer_pole", "must be negative");
  require(control.measurement_noise >= 0.0, "control.measurement_noise", "must be non-negative");
  require(kinematics.optimizer.grid_points >= 8, "kinematics.optimizer.grid_points", "need at least 8");
  require(kinematics.optimizer.starts >= 1, "kinematics.optimizer.starts", "need at least 1");
  require(kinematics.optimizer.jobs >= 1, "kinematics.optimizer.jobs", "need at least 1");
  require((kinematics.bounds.lower.array() <= kinematics.bounds.upper.array()).all(),
          "kinematics.bounds", "every lower bound must not exceed its upper bound");
  try {
    wing_geometry().validate();
    suspension_params().validate(dynamics.guard.semi_axis_x, dynamics.guard.semi_axis_y,
                                 dynamics.guard.semi_axis_z);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", 0, e.what());
  }
}

aero::WingGeometry Config::wing_geometry() const {
  return aero::WingGeometry::tapered(aero.strips, aero.half_span, aero.root_chord, aero.tip_ratio);
}

dynamics::GuardParams Config::guard_params() const {
  auto p = dynamics::GuardParams::from_geometry(dynamics.guard);
  p.gravity = dynamics.gravity;
  return p;
}

dynamics::SuspensionParams Config::suspension_params() const {
  auto s = dynamics::SuspensionParams::defaults(dynamics.band_pretension_upper,
                                                dynamics.band_pretension_lower);
  s.stiffness = dynamics.band_stiffness;
  s.damping = dynamics.band_damping;
  return s;
}

Config parse(const std::string& text, Config base) {
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto comment = raw.find_first_of("#;");
    const std::string s = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("", line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(s, line, "expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("", line, "missing key");
    // Fully qualified keys are accepted under any section.
    if (!section.empty() && key.rfind(section + ".", 0) != 0 && !find(key)) key = section + "." + key;
    set_key(base, key, value, line);
  }
  return base;
}

Config load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string env_name(const std::string& key) {
  std::string out = "AEROBAT_";
  for (char c : key) {
    if (c == '.') out += "__";
    else if (c == '-') out += '_';
    else out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

void apply_env_overrides(Config& config) {
  for (const auto& e : registry())
    if (const char* v = std::getenv(env_name(e.key).c_str())) set_key(config, e.key, trim(v), 0);
}

std::string dump(const Config& config) {
  std::string out;
  for (const auto& e : registry()) out += e.key + " = " + e.get(config) + "\n";
  return out;
}

std::string hash(const Config& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : dump(config)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string reference_markdown() {
  const Config defaults;
  std::string out =
      "# Configuration reference\n\n"
      "Generated by `aerobat config-reference`. Keys may be grouped under `[section]`\n"
      "headers; any key can be overridden from the environment as `AEROBAT_` followed by the\n"
      "key in upper case with `.` written as `__` (for example `AEROBAT_SIM__DT=1e-4`).\n\n"
      "| key | default | description |\n|---|---|---|\n";
  for (const auto& e : registry())
    out += "| `" + e.key + "` | `" + e.get(defaults) + "` | " + e.description + " |\n";
  return out;
}

bool motors_can_lift(const Config& config) {
  const auto guard = config.guard_params();
  return 6.0 * config.control.law.f_max >
         (guard.mass + config.dynamics.aerobat.total_mass()) * config.dynamics.gravity;
}

}  // namespace aerobat::config
