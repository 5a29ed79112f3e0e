#include "aerobat/kinematics/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>

#include "aerobat/angles.hpp"
#include "aerobat/errors.hpp"
#include "aerobat/kinematics/fit.hpp"
#include "aerobat/kinematics/simplex.hpp"

namespace aerobat::kinematics {

namespace {

constexpr double kInfeasiblePenalty = 1e6;
constexpr double kConstraintWeight = 1e3;

std::array<double, kJointCount> bend_limits() {
  std::array<double, kJointCount> lim;
  lim.fill(std::numeric_limits<double>::infinity());
  lim[3] = deg2rad(65.0 + 5.0);
  lim[4] = deg2rad(45.0 + 5.0);
  lim[5] = deg2rad(90.0);
  lim[8] = deg2rad(90.0);
  lim[9] = deg2rad(90.0);
  return lim;
}

std::array<double, kJointCount> max_bends(const std::vector<LinkageState>& states,
                                          BendConvention convention) {
  std::array<double, kJointCount> out{};
  for (int j = 0; j < kJointCount; ++j) {
    if (convention == BendConvention::FromStraight) {
      double worst = 0.0;
      for (const auto& s : states)
        worst = std::max(worst, std::abs(wrap_pi(s.joint_bend_angles[j] - kPi)));
      out[j] = worst;
      continue;
    }
    // Unwrap so a hinge swinging through 0 rad is measured continuously.
    double angle = states.front().joint_bend_angles[j];
    double lo = angle;
    double hi = angle;
    for (std::size_t k = 1; k < states.size(); ++k) {
      angle += wrap_pi(states[k].joint_bend_angles[j] - states[k - 1].joint_bend_angles[j]);
      lo = std::min(lo, angle);
      hi = std::max(hi, angle);
    }
    out[j] = 0.5 * (hi - lo);
  }
  return out;
}

// Same configuration after a full revolution; a branch flip breaks this.
bool closes_periodically(const LinkageDesign& design, const std::vector<LinkageState>& states) {
  const auto wrapped = forward_kinematics(design, kTwoPi, &states.back());
  for (int j = 0; j < kJointCount; ++j)
    if ((wrapped.joint_positions[j] - states.front().joint_positions[j]).norm() > 1e-9)
      return false;
  return true;
}

Eigen::VectorXd to_unit(const Eigen::VectorXd& x, const DesignBounds& b) {
  return ((x - b.lower).array() / (b.upper - b.lower).array()).matrix();
}

Eigen::VectorXd from_unit(const Eigen::VectorXd& u, const DesignBounds& b) {
  return b.lower + (u.array() * (b.upper - b.lower).array()).matrix();
}

struct StartOutcome {
  SimplexResult simplex;
  bool feasible = false;
};

}  // namespace

Eigen::VectorXd design_to_vector(const LinkageDesign& d) {
  Eigen::VectorXd x(kDesignParameterCount);
  const auto& c = d.coupler_lengths;
  const auto& g = d.ground_pivot_positions;
  x << d.crank_radius_shoulder, d.crank_radius_elbow, c.shoulder_coupler, c.shoulder_lever,
      c.elbow_coupler, c.elbow_lever, g.shoulder_crank.x(), g.shoulder_crank.y(),
      g.elbow_crank.x(), g.elbow_crank.y(), d.shoulder_lever_angle, d.elbow_lever_angle,
      d.crank_phase, d.phase_offset;
  return x;
}

LinkageDesign vector_to_design(const Eigen::VectorXd& x, const LinkageDesign& fixed) {
  LinkageDesign d = fixed;
  auto& c = d.coupler_lengths;
  auto& g = d.ground_pivot_positions;
  d.crank_radius_shoulder = x[0];
  d.crank_radius_elbow = x[1];
  c.shoulder_coupler = x[2];
  c.shoulder_lever = x[3];
  c.elbow_coupler = x[4];
  c.elbow_lever = x[5];
  g.shoulder_crank = {x[6], x[7]};
  g.elbow_crank = {x[8], x[9]};
  d.shoulder_lever_angle = x[10];
  d.elbow_lever_angle = x[11];
  d.crank_phase = x[12];
  d.phase_offset = x[13];
  return d;
}

DesignBounds DesignBounds::defaults() {
  DesignBounds b;
  b.lower.resize(kDesignParameterCount);
  b.upper.resize(kDesignParameterCount);
  b.lower << 0.002, 0.002, 0.010, 0.005, 0.020, 0.005, -0.060, -0.040, -0.040, -0.050,
      -kPi, -kPi / 2, -kPi, -kPi;
  b.upper << 0.015, 0.020, 0.060, 0.025, 0.100, 0.025, 0.000, 0.020, 0.030, 0.020,
      0.0, kPi / 2, kPi, kPi;
  return b;
}

DesignEvaluation evaluate_design(const LinkageDesign& design,
                                 const std::vector<GaitTargets>& targets) {
  DesignEvaluation ev;
  ev.states.reserve(targets.size());
  std::vector<double> ts, te, ths, the;
  for (const auto& t : targets) {
    ev.states.push_back(
        forward_kinematics(design, t.phase, ev.states.empty() ? nullptr : &ev.states.back()));
    const auto& s = ev.states.back();
    ts.push_back(s.theta_s);
    te.push_back(s.theta_e);
    ths.push_back(t.theta_s_hat);
    the.push_back(t.theta_e_hat);
    ev.objective += (s.theta_s - t.theta_s_hat) * (s.theta_s - t.theta_s_hat) +
                    (s.theta_e - t.theta_e_hat) * (s.theta_e - t.theta_e_hat);
  }
  ev.r2_shoulder = r_squared(ts, ths);
  ev.r2_elbow = r_squared(te, the);
  ev.theta_s_range = {*std::min_element(ts.begin(), ts.end()), *std::max_element(ts.begin(), ts.end())};
  ev.theta_e_range = {*std::min_element(te.begin(), te.end()), *std::max_element(te.begin(), te.end())};
  return ev;
}

double linkage_objective(const LinkageDesign& design, const std::vector<GaitTargets>& targets,
                         bool penalize_bend) {
  if (!lengths_positive(design)) return 2.0 * kInfeasiblePenalty;
  DesignEvaluation ev;
  try {
    ev = evaluate_design(design, targets);
    if (!closes_periodically(design, ev.states)) return kInfeasiblePenalty;
  } catch (const AssemblyError&) {
    return kInfeasiblePenalty;
  }
  double value = ev.objective;
  double violation = 0.0;
  for (const auto& s : ev.states) violation += std::pow(std::max(0.0, s.theta_e - kPi), 2);
  if (penalize_bend) {
    const auto bends = max_bends(ev.states, BendConvention::FromNeutral);
    const auto lim = bend_limits();
    for (int j = 0; j < kJointCount; ++j)
      violation += targets.size() * std::pow(std::max(0.0, bends[j] - lim[j]), 2);
  }
  if (violation > 0.0) value += 1.0 + kConstraintWeight * violation;
  return value;
}

BendReport bend_angle_check(const LinkageDesign& design, int samples, BendConvention convention) {
  const auto states = sweep_cycle(design, std::max(samples, 360));
  BendReport r;
  r.max_bend = max_bends(states, convention);
  r.limit = bend_limits();
  for (int j = 0; j < kJointCount; ++j)
    if (kIsHinge[j] && r.max_bend[j] > r.limit[j]) r.pass = false;
  return r;
}

OptimizationReport optimize_linkage(const LinkageDesign& init,
                                    const std::vector<GaitTargets>& targets,
                                    const DesignBounds& bounds, const OptimizerOptions& opt) {
  const Eigen::VectorXd x0 =
      design_to_vector(init).cwiseMax(bounds.lower).cwiseMin(bounds.upper);
  const LinkageDesign start_design = vector_to_design(x0, init);
  if (linkage_objective(start_design, targets, false) >= kInfeasiblePenalty)
    throw NoFeasibleStart("initial design does not assemble over the whole phase grid");

  auto objective = [&](const Eigen::VectorXd& u) {
    return linkage_objective(vector_to_design(from_unit(u, bounds), init), targets,
                             opt.penalize_bend);
  };

  // Start points drawn up front so results do not depend on scheduling.
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> jitter(-opt.start_spread, opt.start_spread);
  const Eigen::VectorXd u0 = to_unit(x0, bounds);
  std::vector<Eigen::VectorXd> starts{u0};
  for (int s = 1; s < opt.starts; ++s) {
    Eigen::VectorXd u = u0;
    for (int attempt = 0; attempt < 200; ++attempt) {
      Eigen::VectorXd trial = u0;
      for (int i = 0; i < trial.size(); ++i) trial[i] += jitter(rng);
      trial = trial.cwiseMax(0.0).cwiseMin(1.0);
      if (linkage_objective(vector_to_design(from_unit(trial, bounds), init), targets, false) <
          kInfeasiblePenalty) {
        u = trial;
        break;
      }
    }
    starts.push_back(u);
  }

  SimplexOptions sopt;
  sopt.max_evaluations = opt.evaluations_per_start;
  auto run = [&](std::size_t i) {
    StartOutcome o;
    o.simplex = nelder_mead(objective, starts[i], sopt);
    o.feasible = o.simplex.value < kInfeasiblePenalty;
    return o;
  };

  std::vector<StartOutcome> outcomes(starts.size());
  const auto jobs = static_cast<std::size_t>(std::max(1, opt.jobs));
  for (std::size_t base = 0; base < starts.size(); base += jobs) {
    std::vector<std::future<StartOutcome>> batch;
    for (std::size_t i = base; i < std::min(base + jobs, starts.size()); ++i)
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, run, i));
    for (std::size_t k = 0; k < batch.size(); ++k) outcomes[base + k] = batch[k].get();
  }

  std::size_t best = 0;
  OptimizationReport report;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].feasible) ++report.feasible_starts;
    if (outcomes[i].simplex.value < outcomes[best].simplex.value) best = i;
  }
  const auto& winner = outcomes[best].simplex;
  report.optimized_design = vector_to_design(from_unit(winner.x, bounds), init);
  report.objective = winner.value;
  report.iterations = winner.iterations;
  report.converged = winner.converged;
  report.history = winner.history;

  const auto ev = evaluate_design(report.optimized_design, targets);
  report.r2_shoulder = ev.r2_shoulder;
  report.r2_elbow = ev.r2_elbow;
  report.theta_s_range = ev.theta_s_range;
  report.theta_e_range = ev.theta_e_range;
  report.max_bend_angles = bend_angle_check(report.optimized_design).max_bend;
  return report;
}

}  // namespace aerobat::kinematics
