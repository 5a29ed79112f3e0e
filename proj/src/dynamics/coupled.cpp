#include "aerobat/dynamics/coupled.hpp"

#include <stdexcept>

#include <Eigen/Dense>

namespace aerobat::dynamics {

namespace {

int aero_size(const aero::AeroState& a) {
  return static_cast<int>(a.fourier_a.size() + a.lag.size());
}

}  // namespace

CoupledState CoupledState::initial(const CoupledModels& models) {
  CoupledState s;
  if (models.aero) {
    s.aero_left = aero::AeroState::zero(*models.aero);
    s.aero_right = aero::AeroState::zero(*models.aero);
  } else {
    s.aero_left = {Eigen::VectorXd(), Eigen::VectorXd(), 0.0};
    s.aero_right = s.aero_left;
  }
  return s;
}

int CoupledState::size() const {
  return 2 * kRigidBodySize + aero_size(aero_left) + aero_size(aero_right);
}

Eigen::VectorXd pack(const CoupledState& s) {
  Eigen::VectorXd x(s.size());
  pack(s.guard, x.segment(0, kRigidBodySize));
  pack(s.aerobat, x.segment(kRigidBodySize, kRigidBodySize));
  Eigen::Index i = 2 * kRigidBodySize;
  for (const auto* a : {&s.aero_left, &s.aero_right}) {
    x.segment(i, a->fourier_a.size()) = a->fourier_a;
    i += a->fourier_a.size();
    x.segment(i, a->lag.size()) = a->lag;
    i += a->lag.size();
  }
  return x;
}

CoupledState unpack(const Eigen::Ref<const Eigen::VectorXd>& x, const CoupledState& like) {
  if (x.size() != like.size()) throw std::invalid_argument("coupled state size mismatch");
  CoupledState s = like;
  s.guard = unpack_rigid_body(x.segment(0, kRigidBodySize));
  s.aerobat = unpack_rigid_body(x.segment(kRigidBodySize, kRigidBodySize));
  Eigen::Index i = 2 * kRigidBodySize;
  for (auto* a : {&s.aero_left, &s.aero_right}) {
    a->fourier_a = x.segment(i, a->fourier_a.size());
    i += a->fourier_a.size();
    a->lag = x.segment(i, a->lag.size());
    i += a->lag.size();
    a->time = s.time;
  }
  return s;
}

WingFlow wing_flow(const RigidBodyState& aerobat, const JointTrajectory& gait, int side,
                   const aero::AeroModel& model, const AerobatParams& p) {
  const auto& geometry = model.geometry();
  const Vector3d v_body = aerobat.rotation().transpose() * aerobat.velocity;
  WingFlow f;
  for (const auto& strip : geometry.strips) {
    const double arc = strip.station * p.arm_length() / geometry.half_span;
    const ArmPoint a = arm_point(arc, side, gait, p);
    const Vector3d from_body = -(v_body + aerobat.omega.cross(a.r));
    const Vector3d from_flapping = -a.rd;
    f.body.push_back({a.r, from_body, a.normal});
    f.flapping.push_back({a.r, from_flapping, a.normal});
    f.total.push_back({a.r, from_body + from_flapping, a.normal});
  }
  return f;
}

Eigen::VectorXd coupled_derivatives(const CoupledState& s, const MotorForces& motors,
                                    const CoupledModels& models, CoupledOutputs* outputs) {
  CoupledOutputs local;
  CoupledOutputs& o = outputs ? *outputs : local;
  const double g = models.guard.gravity;
  const double m_a = models.aerobat.total_mass();

  o.gait = models.gait.at(s.time);
  o.suspension = suspension_wrench(s.guard, s.aerobat, models.suspension, m_a, g);

  Eigen::VectorXd dx(s.size());
  Eigen::Index i = 2 * kRigidBodySize;
  o.aero_force.setZero();
  o.aero_moment.setZero();
  if (models.aero) {
    const auto& model = *models.aero;
    const double u_ref = model.params().reference_speed;
    for (int side : {1, -1}) {
      const auto& state = side > 0 ? s.aero_left : s.aero_right;
      const WingFlow flow = wing_flow(s.aerobat, o.gait, side, model, models.aerobat);
      auto& forcing = side > 0 ? o.forcing_left : o.forcing_right;
      forcing = aero::strip_forcing(flow.body, flow.flapping, u_ref);
      (side > 0 ? o.y1_left : o.y1_right) = forcing.y1;

      aero::AeroState timed = state;
      timed.time = s.time;
      const auto d = aero::aero_derivative(timed, model, forcing.y1);
      dx.segment(i, d.fourier_a.size()) = d.fourier_a;
      i += d.fourier_a.size();
      dx.segment(i, d.lag.size()) = d.lag;
      i += d.lag.size();

      const auto out = aero::aero_output(timed, model, forcing.y1, flow.total);
      o.aero_force += out.force;
      o.aero_moment += out.moment;
    }
  }

  const Matrix3d rg = s.guard.rotation();
  o.guard_wrench = body_wrench(motors, models.guard, rg.transpose() * o.suspension.force_on_guard,
                               o.suspension.moment_on_guard);
  pack(guard_derivatives(s.guard, o.guard_wrench, models.guard), dx.segment(0, kRigidBodySize));

  const Vector3d force_a =
      s.aerobat.rotation().transpose() * o.suspension.force_on_aerobat + o.aero_force;
  const Vector3d moment_a = o.suspension.moment_on_aerobat + o.aero_moment;
  pack(aerobat_derivatives(s.aerobat, o.gait, force_a, moment_a, models.aerobat, g),
       dx.segment(kRigidBodySize, kRigidBodySize));
  return dx;
}

Vector3d total_momentum(const CoupledState& s, const CoupledModels& models) {
  return models.guard.mass * s.guard.velocity +
         aerobat_momentum(s.aerobat, models.gait.at(s.time), models.aerobat);
}

double total_energy(const CoupledState& s, const CoupledModels& models) {
  const double g = models.guard.gravity;
  const JointTrajectory gait = models.gait.at(s.time);
  return kinetic_energy(s.guard, models.guard.mass, models.guard.inertia) +
         models.guard.mass * g * s.guard.position.z() +
         aerobat_kinetic_energy(s.aerobat, gait, models.aerobat) +
         aerobat_gravity_potential(s.aerobat, gait, models.aerobat, g) +
         suspension_potential(s.guard, s.aerobat, models.suspension, 0.0, g);
}

Vector3d static_hang_offset(const CoupledModels& models) {
  const double weight = models.aerobat.total_mass() * models.guard.gravity;
  RigidBodyState guard, aerobat;
  auto residual = [&](const Vector3d& p) {
    aerobat.position = p;
    return Vector3d(suspension_wrench(guard, aerobat, models.suspension, 0.0, 0.0).force_on_aerobat +
                    Vector3d(0.0, 0.0, -weight));
  };
  Vector3d p = Vector3d::Zero();
  for (int it = 0; it < 100; ++it) {
    const Vector3d r = residual(p);
    if (r.norm() < 1e-13) return p;
    Matrix3d jac;
    constexpr double h = 1e-7;
    for (int k = 0; k < 3; ++k) {
      Vector3d dp = Vector3d::Zero();
      dp[k] = h;
      jac.col(k) = (residual(p + dp) - residual(p - dp)) / (2.0 * h);
    }
    p -= jac.fullPivLu().solve(r);
  }
  if (residual(p).norm() < 1e-9) return p;
  throw std::runtime_error("suspension static equilibrium did not converge");
}

}  // namespace aerobat::dynamics
