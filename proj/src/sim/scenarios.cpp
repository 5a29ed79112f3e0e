#include "aerobat/sim/scenarios.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "aerobat/angles.hpp"
#include "aerobat/control/allocation.hpp"
#include "aerobat/control/control_law.hpp"
#include "aerobat/control/observer.hpp"
#include "aerobat/errors.hpp"
#include "aerobat/sim/integrator.hpp"
#include "aerobat/sim/rk4.hpp"

namespace aerobat::sim {

using control::Vector6d;
using dynamics::Vector3d;

namespace {

std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

std::vector<std::string> numbered(const std::string& stem, int n, int first = 1) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(stem + std::to_string(first + i));
  return out;
}

void extend(std::vector<std::string>& cols, std::initializer_list<std::string> names) {
  cols.insert(cols.end(), names);
}

Vector6d pose_of(const dynamics::RigidBodyState& s) {
  Vector6d x;
  x << s.position, dynamics::euler_zyx(s.orientation);
  return x;
}

ScenarioResult run_coupled(const config::Config& c, bool controlled, const std::string& name) {
  c.validate();
  const auto models = build_models(c);
  const auto& guard = models.guard;
  auto state = initial_state(models);

  const control::ControlLaw& law = c.control.law;
  const auto gains = control::place_observer_poles(c.control.observer_pole,
                                                   control::hover_g3_diagonal(guard));
  std::mt19937_64 rng(c.sim.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  auto measure = [&](const dynamics::CoupledState& s) {
    Vector6d y = pose_of(s.guard);
    if (c.control.measurement_noise > 0.0)
      for (int i = 0; i < 6; ++i) y[i] += c.control.measurement_noise * noise(rng);
    return y;
  };

  const Vector6d setpoint = pose_of(state.guard);
  control::ObserverState obs;
  Vector6d y = measure(state);
  obs.x1 = y;

  std::vector<std::string> cols = {"time", "pg_x", "pg_y", "pg_z", "roll_g", "pitch_g", "yaw_g",
                                   "wg_x", "wg_y", "wg_z", "pa_x", "pa_y", "pa_z", "roll_a",
                                   "pitch_a", "yaw_a", "theta_s", "theta_e"};
  for (auto& s : numbered("f", 6)) cols.push_back(s);
  for (auto& s : numbered("band", static_cast<int>(models.suspension.bands.size()))) cols.push_back(s);
  extend(cols, {"position_error", "attitude_error_deg"});
  TrajectoryLog log(cols, config::hash(c));

  std::vector<std::string> fcols = {"time"};
  for (const char* stem : {"est_", "band_"})
    for (const char* axis : {"fx", "fy", "fz", "mx", "my", "mz"}) fcols.push_back(std::string(stem) + axis);
  extend(fcols, {"aero_fx", "aero_fy", "aero_fz", "inertial_fx", "inertial_fy", "inertial_fz"});
  TrajectoryLog forces(fcols, config::hash(c));

  const long steps = std::lround(c.sim.duration / c.sim.dt);
  std::vector<double> metric_time;
  std::vector<Vector3d> pos_err, att_err;
  std::vector<double> z_series, z_time;
  ScenarioResult result;
  result.scenario = name;

  for (long k = 0;; ++k) {
    dynamics::MotorForces motors{};
    if (controlled && c.control.motors_enabled) {
      const auto cmd = control::control_law(obs, setpoint, law, guard);
      motors = control::allocate(cmd.wrench, guard, law.f_max).forces;
    }

    const Vector6d truth = pose_of(state.guard);
    Vector3d pe = truth.head<3>() - setpoint.head<3>();
    Vector3d ae;
    for (int i = 0; i < 3; ++i) ae[i] = wrap_pi(truth[3 + i] - setpoint[3 + i]);
    if (state.time >= c.sim.transient) {
      metric_time.push_back(state.time);
      pos_err.push_back(pe);
      att_err.push_back(ae * 180.0 / kPi);
    }
    z_time.push_back(state.time);
    z_series.push_back(truth[2]);

    if (k % c.sim.log_every == 0) {
      dynamics::CoupledOutputs out;
      dynamics::coupled_derivatives(state, motors, models, &out);
      const auto rel = dynamics::relative_pose(state.guard, state.aerobat);
      std::vector<double> row = {state.time};
      for (int i = 0; i < 6; ++i) row.push_back(truth[i]);
      for (int i = 0; i < 3; ++i) row.push_back(state.guard.omega[i]);
      for (int i = 0; i < 3; ++i) row.push_back(rel.position[i]);
      for (int i = 0; i < 3; ++i) row.push_back(rel.angles[i]);
      row.push_back(out.gait.q[0]);
      row.push_back(out.gait.q[1]);
      for (double f : motors) row.push_back(f);
      for (double t : out.suspension.tensions) row.push_back(t);
      row.push_back(pe.norm());
      row.push_back(ae.norm() * 180.0 / kPi);
      log.append(std::move(row));

      const Eigen::Matrix3d ra = state.aerobat.rotation();
      const Vector3d aero_world = ra * out.aero_force;
      const Vector3d inertial = out.suspension.force_on_aerobat + out.suspension.gravity_on_aerobat + aero_world;
      std::vector<double> frow = {state.time};
      for (int i = 0; i < 6; ++i) frow.push_back(obs.x3[i]);
      for (int i = 0; i < 3; ++i) frow.push_back(out.suspension.force_on_guard[i]);
      for (int i = 0; i < 3; ++i) frow.push_back(out.suspension.moment_on_guard[i]);
      for (int i = 0; i < 3; ++i) frow.push_back(aero_world[i]);
      for (int i = 0; i < 3; ++i) frow.push_back(inertial[i]);
      forces.append(std::move(frow));
    }
    if (k >= steps) break;

    try {
      const auto next = step_coupled(state, motors, models, c.sim.dt, c.sim.integrator);
      const Vector6d y_next = measure(next);
      if (controlled) {
        Vector6d u;
        for (int i = 0; i < 6; ++i) u[i] = motors[static_cast<std::size_t>(i)];
        const auto terms = control::guard_model_terms(obs.x1, obs.x2, guard);
        obs = control::observer_step(obs, y, y_next, u, terms, gains, c.sim.dt);
        check_finite(obs.x3, next.time, "observer state");
      }
      y = y_next;
      state = next;
    } catch (const NumericalBlowup& e) {
      result.failure = e.what();
      break;
    }
  }

  result.logs = {{"trajectory", std::move(log)}, {"force_decomposition", std::move(forces)}};
  if (!pos_err.empty()) {
    result.metrics.rms_position_error = rms_after(metric_time, pos_err, c.sim.transient);
    result.metrics.rms_attitude_error_deg = rms_after(metric_time, att_err, c.sim.transient);
  }
  result.metrics.settling_time = settling_time(z_time, z_series);

  if (controlled) {
    result.passed = !result.failure && result.metrics.rms_position_error &&
                    *result.metrics.rms_position_error <= c.sim.max_rms_position &&
                    *result.metrics.rms_attitude_error_deg <= c.sim.max_rms_attitude_deg;
  } else {
    result.passed = !result.failure;
  }
  std::ostringstream os;
  os << name << ": ";
  if (result.metrics.rms_position_error)
    os << "rms position " << fixed(*result.metrics.rms_position_error, 5) << " m, rms attitude "
       << fixed(*result.metrics.rms_attitude_error_deg, 3) << " deg, ";
  os << "final z " << fixed(z_series.back(), 4) << " m";
  if (result.failure) os << " (" << *result.failure << ")";
  result.summary = os.str();
  return result;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"hover", "wingtip-trace", "aero-step",
                                                 "observer-demo", "free-flight"};
  return names;
}

Scenario parse_scenario(std::string_view name) {
  const auto& names = scenario_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<Scenario>(i);
  std::string list;
  for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown scenario '" + std::string(name) + "'; valid: " + list);
}

std::string_view to_string(Scenario s) { return scenario_names()[static_cast<std::size_t>(s)]; }

dynamics::CoupledModels build_models(const config::Config& c) {
  dynamics::CoupledModels m;
  m.guard = c.guard_params();
  m.aerobat = c.dynamics.aerobat;
  m.aerobat.humerus_length = c.kinematics.design.humerus_length;
  m.aerobat.radius_length = c.kinematics.design.radius_length;
  m.suspension = c.suspension_params();
  const double f = m.aerobat.flapping_frequency;
  const int h = c.dynamics.gait_harmonics;
  m.gait = c.dynamics.gait_source == config::GaitSource::Target
               ? dynamics::GaitSchedule::from_targets(f, h, 720, c.kinematics.elbow_target)
               : dynamics::GaitSchedule::from_linkage(c.kinematics.design, f, h, 720);
  if (c.aero.enabled)
    m.aero = std::make_shared<const aero::AeroModel>(c.wing_geometry(), c.aero.params);
  return m;
}

dynamics::CoupledState initial_state(const dynamics::CoupledModels& models) {
  auto s = dynamics::CoupledState::initial(models);
  s.aerobat.position = dynamics::static_hang_offset(models);
  return s;
}

ScenarioResult run_hover(const config::Config& c) { return run_coupled(c, true, "hover"); }

ScenarioResult run_free_flight(const config::Config& c) {
  return run_coupled(c, false, "free-flight");
}

ScenarioResult run_wingtip_trace(const config::Config& c) {
  c.validate();
  const auto& design = c.kinematics.design;
  const int n = c.sim.wingtip_samples;
  const double f = c.dynamics.aerobat.flapping_frequency > 0.0 ? c.dynamics.aerobat.flapping_frequency : 1.0;
  std::mt19937_64 rng(c.sim.seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);

  TrajectoryLog log({"time", "cycle", "phase", "tip_y", "tip_z"}, config::hash(c));
  std::vector<std::vector<Eigen::Vector2d>> cycles;
  const kinematics::LinkageState* previous = nullptr;
  kinematics::LinkageState last;
  for (int k = 0; k < c.sim.wingtip_cycles; ++k) {
    std::vector<Eigen::Vector2d> path;
    for (int i = 0; i < n; ++i) {
      double phi = kTwoPi * i / n;
      if (c.sim.phase_jitter > 0.0) phi *= 1.0 + c.sim.phase_jitter * jitter(rng);
      last = kinematics::forward_kinematics(design, phi, previous);
      previous = &last;
      const auto& tip = last.joint_positions[kinematics::kJointCount - 1];
      path.push_back(tip);
      log.append({(k + static_cast<double>(i) / n) / f, static_cast<double>(k), phi, tip.x(), tip.y()});
    }
    cycles.push_back(std::move(path));
  }

  ScenarioResult r;
  r.scenario = "wingtip-trace";
  r.metrics.wingtip_deviation = cycle_deviation(cycles, c.sim.wingspan);
  r.passed = *r.metrics.wingtip_deviation <= c.sim.max_wingtip_deviation;
  r.logs = {{"wingtip", std::move(log)}};
  r.summary = "wingtip-trace: cycle-to-cycle deviation " +
              fixed(100.0 * *r.metrics.wingtip_deviation, 3) + "% of wingspan over " +
              std::to_string(c.sim.wingtip_cycles) + " wingbeats";
  return r;
}

ScenarioResult run_aero_step(const config::Config& c) {
  c.validate();
  const aero::AeroModel model(c.wing_geometry(), c.aero.params);
  const int m = model.strips();
  const double dt = c.sim.aero_dt;
  const long steps = std::lround(c.sim.aero_duration / dt);
  const double w = kTwoPi * c.sim.aero_frequency;
  auto forcing = [&](double t) {
    return Eigen::VectorXd::Constant(m, c.sim.aero_amplitude * std::sin(w * t));
  };

  std::vector<std::vector<double>> y_eff(static_cast<std::size_t>(m)), beta_ss(static_cast<std::size_t>(m));
  std::vector<double> times;
  auto state = aero::AeroState::zero(model);
  ScenarioResult r;
  r.scenario = "aero-step";
  for (long k = 0; k <= steps; ++k) {
    const double t = k * dt;
    const Eigen::VectorXd y1 = forcing(t);
    const Eigen::VectorXd ye = aero::effective_kinematics(state, model, y1);
    const Eigen::VectorXd b = aero::beta(state, model, y1);
    times.push_back(t);
    for (int i = 0; i < m; ++i) {
      y_eff[static_cast<std::size_t>(i)].push_back(ye[i]);
      beta_ss[static_cast<std::size_t>(i)].push_back(b[i]);
    }
    if (k == steps) break;
    try {
      state = aero::aero_step(state, model, y1, forcing(t + dt), dt);
    } catch (const NumericalBlowup& e) {
      r.failure = e.what();
      break;
    }
  }

  std::vector<std::string> cols = {"time", "y1"};
  for (int i = 0; i < m; ++i) {
    cols.push_back("beta_state_" + std::to_string(i + 1));
    cols.push_back("beta_oracle_" + std::to_string(i + 1));
  }
  cols.push_back("max_relative_error");
  TrajectoryLog log(cols, config::hash(c));

  std::vector<std::vector<double>> beta_or;
  double err2 = 0.0, ref2 = 0.0;
  for (int i = 0; i < m; ++i) {
    const double chord = model.geometry().strips[static_cast<std::size_t>(i)].chord;
    beta_or.push_back(aero::wagner_response_oracle(y_eff[static_cast<std::size_t>(i)], dt,
                                                   c.aero.params.wagner, chord,
                                                   c.aero.params.time_scale()));
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double d = beta_ss[static_cast<std::size_t>(i)][k] - beta_or.back()[k];
      err2 += d * d;
      ref2 += beta_or.back()[k] * beta_or.back()[k];
    }
  }
  const double ref_rms = std::sqrt(ref2 / static_cast<double>(m * times.size()));
  for (std::size_t k = 0; k < times.size(); ++k) {
    std::vector<double> row = {times[k], forcing(times[k])[0]};
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      const double s = beta_ss[static_cast<std::size_t>(i)][k], o = beta_or[static_cast<std::size_t>(i)][k];
      row.push_back(s);
      row.push_back(o);
      worst = std::max(worst, std::abs(s - o) / ref_rms);
    }
    row.push_back(worst);
    log.append(std::move(row));
  }

  const double rel = std::sqrt(err2 / ref2);
  r.metrics.max_relative_error = rel;
  r.passed = !r.failure && rel <= c.sim.max_aero_rms_error;
  r.logs = {{"aero_step", std::move(log)}};
  r.summary = "aero-step: state-space vs convolution relative RMS error " + fixed(100.0 * rel, 4) + "%";
  return r;
}

ScenarioResult run_observer_demo(const config::Config& c) {
  c.validate();
  const auto guard = c.guard_params();
  const Vector6d g3 = control::hover_g3_diagonal(guard);
  const auto gains = control::place_observer_poles(c.control.observer_pole, g3);
  const double dt = c.sim.dt;
  const long steps = std::lround(std::min(c.sim.duration, 2.0) / dt);

  // Guard hovering on its motors with a constant sideways push it does not know about.
  const double hover = guard.mass * guard.gravity / 6.0;
  const dynamics::MotorForces motors = {hover, hover, hover, hover, hover, hover};
  const Vector6d u = Vector6d::Constant(hover);
  const Vector3d push(c.sim.observer_disturbance, 0.0, 0.0);

  dynamics::RigidBodyState body;
  auto plant = [&](double, const Eigen::Matrix<double, 13, 1>& x) {
    const auto s = dynamics::unpack_rigid_body(x);
    const auto w = dynamics::body_wrench(motors, guard, s.rotation().transpose() * push);
    Eigen::Matrix<double, 13, 1> d;
    dynamics::pack(dynamics::guard_derivatives(s, w, guard), d);
    return d;
  };

  control::ObserverState obs;
  const Eigen::Matrix3d em = control::error_matrix(gains, 0, g3[0]);
  const Eigen::Vector3d e0(0.0, 0.0, -push.x());

  TrajectoryLog log({"time", "x3_true", "x3_estimate", "e1", "e2", "e3", "e3_closed_form"},
                    config::hash(c));
  double worst = 0.0;
  double t = 0.0;
  Eigen::Matrix<double, 13, 1> x;
  dynamics::pack(body, x);
  for (long k = 0;; ++k) {
    const auto s = dynamics::unpack_rigid_body(x);
    const Eigen::Vector3d e(obs.x1[0] - s.position.x(), obs.x2[0] - s.velocity.x(), obs.x3[0] - push.x());
    const Eigen::Vector3d closed = (em * t).exp() * e0;
    worst = std::max(worst, (e - closed).lpNorm<Eigen::Infinity>());
    if (k % c.sim.log_every == 0)
      log.append({t, push.x(), obs.x3[0], e[0], e[1], e[2], closed[2]});
    if (k >= steps) break;

    auto measurement = [&](double tau) -> Vector6d {
      // Dense output of the plant over the step: RK4 from the step start.
      const auto xs = tau > t ? rk4_step(plant, t, x, tau - t) : x;
      return pose_of(dynamics::unpack_rigid_body(xs));
    };
    const auto terms = control::guard_model_terms(obs.x1, obs.x2, guard);
    obs = control::observer_step(obs, measurement, t, u, terms, gains, dt);
    x = rk4_step(plant, t, x, dt);
    t += dt;
  }

  ScenarioResult r;
  r.scenario = "observer-demo";
  const double final_error = std::abs(obs.x3[0] - push.x()) / std::max(std::abs(push.x()), 1e-12);
  r.metrics.max_relative_error = worst / std::max(std::abs(push.x()), 1e-12);
  r.metrics.settling_time = settling_time(log.series("time"), log.series("x3_estimate"));
  r.passed = final_error <= 0.01 && *r.metrics.max_relative_error <= 1e-4;
  r.logs = {{"observer", std::move(log)}};
  r.summary = "observer-demo: disturbance estimate within " + fixed(100.0 * final_error, 4) +
              "% after " + fixed(t, 2) + " s; largest deviation from the closed-form error " +
              fixed(worst, 9);
  return r;
}

ScenarioResult run_scenario(Scenario s, const config::Config& c) {
  switch (s) {
    case Scenario::Hover: return run_hover(c);
    case Scenario::WingtipTrace: return run_wingtip_trace(c);
    case Scenario::AeroStep: return run_aero_step(c);
    case Scenario::ObserverDemo: return run_observer_demo(c);
    case Scenario::FreeFlight: return run_free_flight(c);
  }
  throw std::invalid_argument("unknown scenario");
}

}  // namespace aerobat::sim
