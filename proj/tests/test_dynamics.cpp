#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "aerobat/angles.hpp"
#include "aerobat/dynamics/aerobat_rom.hpp"
#include "aerobat/dynamics/coupled.hpp"
#include "aerobat/dynamics/guard.hpp"
#include "aerobat/dynamics/suspension.hpp"
#include "aerobat/sim/integrator.hpp"
#include "aerobat/sim/rk4.hpp"

using namespace aerobat;
using namespace aerobat::dynamics;

namespace {

Quaterniond rotate_body(const Quaterniond& q, const Vector3d& dtheta) {
  const double a = dtheta.norm();
  if (a == 0.0) return q;
  return (q * Quaterniond(Eigen::AngleAxisd(a, dtheta / a))).normalized();
}

RigidBodyDerivative rb_deriv(const Eigen::VectorXd& x, const GuardParams& p) {
  return guard_derivatives(unpack_rigid_body(x), BodyWrench{}, p);
}

Eigen::VectorXd rb_rhs(const Eigen::VectorXd& x, const GuardParams& p) {
  Eigen::VectorXd d(kRigidBodySize);
  pack(rb_deriv(x, p), d);
  return d;
}

CoupledModels conservative_models() {
  CoupledModels m;
  m.suspension.damping = 0.0;
  return m;
}

// Aerobat displaced from centre with a small tilt so all bands stay taut.
CoupledState perturbed(const CoupledModels& m) {
  CoupledState s = CoupledState::initial(m);
  s.aerobat.position = static_hang_offset(m) + Vector3d(0.002, -0.001, 0.0015);
  s.aerobat.orientation = from_euler_zyx(Vector3d(0.03, -0.02, 0.04));
  s.aerobat.velocity = Vector3d(0.01, 0.0, -0.02);
  s.guard.omega = Vector3d(0.1, -0.2, 0.05);
  return s;
}

}  // namespace

TEST(Guard, BodyWrenchFromMotorPairs) {
  const auto p = GuardParams::defaults();
  const MotorForces f{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const auto w = body_wrench(f, p, Vector3d(0.01, 0.02, 0.03), Vector3d(1e-3, 0, 0));
  EXPECT_NEAR(w.force.z(), 2.1 + 0.03, 1e-15);
  EXPECT_NEAR(w.force.x(), 0.01, 1e-15);
  EXPECT_NEAR(w.moment.x(), p.arm_x * (0.4 - 0.2) + 1e-3, 1e-15);
  EXPECT_NEAR(w.moment.y(), p.arm_y * (0.3 - 0.1), 1e-15);
  EXPECT_NEAR(w.moment.z(), p.arm_z * (0.6 - 0.5), 1e-15);
  Eigen::Matrix<double, 6, 1> fv;
  fv << 0.1, 0.2, 0.3, 0.4, 0.5, 0.6;
  EXPECT_NEAR((allocation_matrix(p) * fv - motor_wrench(f, p)).norm(), 0.0, 1e-15);
}

TEST(Guard, MassPropertiesFromGeometry) {
  const auto p = GuardParams::defaults();
  EXPECT_NEAR(p.mass, 0.060, 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix3d> es(p.inertia);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(Guard, EqualThrustHovers) {
  const auto p = GuardParams::defaults();
  const double each = p.mass * p.gravity / 6.0;
  const auto d = guard_derivatives(RigidBodyState{}, body_wrench({each, each, each, each, each, each}, p), p);
  EXPECT_NEAR(d.acceleration.norm(), 0.0, 1e-14);
  EXPECT_NEAR(d.omega_rate.norm(), 0.0, 1e-14);
}

TEST(Guard, TorqueFreeTumblingConservesEnergyAndMomentum) {
  GuardParams p = GuardParams::defaults();
  p.gravity = 0.0;
  p.inertia = Eigen::Vector3d(1e-4, 2e-4, 3e-4).asDiagonal();
  RigidBodyState s;
  s.omega = Vector3d(3.0, 0.1, -2.0);
  Eigen::VectorXd x(kRigidBodySize);
  pack(s, x);
  auto ang = [&](const Eigen::VectorXd& v) {
    const auto b = unpack_rigid_body(v);
    return Vector3d(b.rotation() * (p.inertia * b.omega));
  };
  const double e0 = kinetic_energy(s, p.mass, p.inertia);
  const Vector3d h0 = ang(x);
  for (int k = 0; k < 4000; ++k)
    x = sim::rk4_step([&](double, const Eigen::VectorXd& v) { return rb_rhs(v, p); }, 0.0, x, 5e-4);
  EXPECT_NEAR(kinetic_energy(unpack_rigid_body(x), p.mass, p.inertia) / e0, 1.0, 1e-6);
  EXPECT_NEAR((ang(x) - h0).norm() / h0.norm(), 0.0, 1e-6);
}

TEST(Guard, Rk4IsFourthOrder) {
  GuardParams p = GuardParams::defaults();
  p.inertia = Eigen::Vector3d(1e-4, 2e-4, 3e-4).asDiagonal();
  RigidBodyState s;
  s.omega = Vector3d(3.0, 0.5, -2.0);
  Eigen::VectorXd x0(kRigidBodySize);
  pack(s, x0);
  auto run = [&](double dt) {
    Eigen::VectorXd x = x0;
    for (int k = 0; k < static_cast<int>(std::lround(0.5 / dt)); ++k)
      x = sim::rk4_step([&](double, const Eigen::VectorXd& v) { return rb_rhs(v, p); }, 0.0, x, dt);
    return x;
  };
  const auto ref = run(1.25e-4);
  const double e1 = (run(4e-3) - ref).norm(), e2 = (run(2e-3) - ref).norm();
  EXPECT_GT(std::log2(e1 / e2), 3.5);
}

TEST(Euler, RoundTripAndRateMatrix) {
  const Vector3d rpy(0.2, -0.4, 1.1);
  EXPECT_NEAR((euler_zyx(from_euler_zyx(rpy)) - rpy).norm(), 0.0, 1e-13);
  // Angle rates from finite differences of a body-frame rotation.
  const Vector3d w(0.3, -0.5, 0.7);
  const double h = 1e-6;
  const Vector3d plus = euler_zyx(rotate_body(from_euler_zyx(rpy), w * h));
  const Vector3d minus = euler_zyx(rotate_body(from_euler_zyx(rpy), -w * h));
  EXPECT_NEAR(((plus - minus) / (2 * h) - euler_rate_matrix(rpy) * w).norm(), 0.0, 1e-7);
}

TEST(Suspension, DefaultsAreValidAndTaut) {
  const auto sp = SuspensionParams::defaults();
  EXPECT_EQ(sp.bands.size(), 8u);
  EXPECT_NO_THROW(sp.validate());
  const auto w = suspension_wrench(RigidBodyState{}, RigidBodyState{}, sp, 0.0, 0.0);
  for (double t : w.tensions) EXPECT_GT(t, 0.0);
}

TEST(Suspension, ForcesAreNegativePotentialGradient) {
  const auto sp = SuspensionParams::defaults();
  const double m = 0.045, g = 9.8;
  RigidBodyState guard, aerobat;
  guard.position = Vector3d(0.1, -0.2, 0.3);
  guard.orientation = from_euler_zyx(Vector3d(0.05, -0.1, 0.3));
  aerobat.position = guard.position + guard.rotation() * Vector3d(0.003, -0.002, -0.004);
  aerobat.orientation = guard.orientation * from_euler_zyx(Vector3d(-0.04, 0.06, 0.02));
  const auto w = suspension_wrench(guard, aerobat, sp, m, g);
  auto v = [&](const RigidBodyState& gg, const RigidBodyState& aa) {
    return suspension_potential(gg, aa, sp, m, g);
  };
  const double h = 1e-6;
  for (int k = 0; k < 3; ++k) {
    Vector3d e = Vector3d::Zero();
    e[k] = h;
    auto gp = guard, gm = guard, ap = aerobat, am = aerobat;
    gp.position += e;
    gm.position -= e;
    ap.position += e;
    am.position -= e;
    EXPECT_NEAR(w.force_on_guard[k], -(v(gp, aerobat) - v(gm, aerobat)) / (2 * h), 1e-6);
    EXPECT_NEAR(w.force_on_aerobat[k] + w.gravity_on_aerobat[k],
                -(v(guard, ap) - v(guard, am)) / (2 * h), 1e-6);
    gp = guard, gm = guard, ap = aerobat, am = aerobat;
    gp.orientation = rotate_body(guard.orientation, e);
    gm.orientation = rotate_body(guard.orientation, -e);
    ap.orientation = rotate_body(aerobat.orientation, e);
    am.orientation = rotate_body(aerobat.orientation, -e);
    EXPECT_NEAR(w.moment_on_guard[k], -(v(gp, aerobat) - v(gm, aerobat)) / (2 * h), 1e-8);
    EXPECT_NEAR(w.moment_on_aerobat[k], -(v(guard, ap) - v(guard, am)) / (2 * h), 1e-8);
  }
}

TEST(Suspension, ActionReaction) {
  const auto sp = SuspensionParams::defaults();
  RigidBodyState guard, aerobat;
  aerobat.position = Vector3d(0.002, 0.001, -0.003);
  const auto w = suspension_wrench(guard, aerobat, sp, 0.0, 0.0);
  EXPECT_NEAR((w.force_on_guard + w.force_on_aerobat).norm(), 0.0, 1e-14);
}

TEST(Suspension, TranslationInvariant) {
  const auto sp = SuspensionParams::defaults();
  RigidBodyState guard, aerobat;
  aerobat.position = Vector3d(0.002, 0.001, -0.003);
  const auto w0 = suspension_wrench(guard, aerobat, sp, 0.04, 9.8);
  guard.position += Vector3d(5.0, -3.0, 2.0);
  aerobat.position += Vector3d(5.0, -3.0, 2.0);
  const auto w1 = suspension_wrench(guard, aerobat, sp, 0.04, 9.8);
  EXPECT_NEAR((w0.force_on_guard - w1.force_on_guard).norm(), 0.0, 1e-12);
  EXPECT_NEAR((w0.moment_on_aerobat - w1.moment_on_aerobat).norm(), 0.0, 1e-12);
}

TEST(Suspension, SlackBandCarriesNothing) {
  SuspensionParams sp;
  sp.bands = {{Vector3d(0, 0, 0.09), Vector3d(0, 0, 0.01), 0.1}};
  const auto w = suspension_wrench(RigidBodyState{}, RigidBodyState{}, sp, 0.0, 0.0);
  EXPECT_EQ(w.tensions[0], 0.0);
  EXPECT_EQ(w.force_on_guard.norm(), 0.0);
}

TEST(AerobatRom, MassMatrixPositiveDefiniteOverCycle) {
  const AerobatParams p;
  const auto gait = GaitSchedule::from_targets(p.flapping_frequency);
  RigidBodyState s;
  s.orientation = from_euler_zyx(Vector3d(0.1, 0.2, 0.3));
  for (int k = 0; k < 64; ++k) {
    const auto m = rom_matrices(s, gait.at(k / 64.0 / p.flapping_frequency), p, 9.8);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(m.d_u);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    EXPECT_NEAR((m.d_u - m.d_u.transpose()).norm(), 0.0, 1e-15);
  }
}

TEST(AerobatRom, FrozenGaitFallsFreely) {
  const AerobatParams p;
  RigidBodyState s;
  s.orientation = from_euler_zyx(Vector3d(0.3, -0.2, 0.5));
  const auto d = aerobat_derivatives(s, GaitSchedule::fixed(0.3, 2.0).at(0.0), Vector3d::Zero(),
                                     Vector3d::Zero(), p, 9.8);
  EXPECT_NEAR((d.acceleration - Vector3d(0, 0, -9.8)).norm(), 0.0, 1e-12);
  EXPECT_NEAR(d.omega_rate.norm(), 0.0, 1e-10);
}

TEST(AerobatRom, ArmPointVelocityIsJacobianTimesRate) {
  const AerobatParams p;
  const auto gait = GaitSchedule::from_targets(p.flapping_frequency);
  const double t = 0.013, h = 1e-7;
  for (int side : {-1, 1}) {
    const auto a = arm_point(0.07, side, gait.at(t), p);
    const auto ap = arm_point(0.07, side, gait.at(t + h), p);
    const auto am = arm_point(0.07, side, gait.at(t - h), p);
    EXPECT_NEAR(((ap.r - am.r) / (2 * h) - a.rd).norm(), 0.0, 1e-6);
    EXPECT_NEAR((a.jacobian * gait.at(t).qd - a.rd).norm(), 0.0, 1e-12);
    EXPECT_NEAR(((ap.rd - am.rd) / (2 * h) - a.rdd).norm(), 0.0, 1e-4);
  }
}

TEST(AerobatRom, GaitDerivativesConsistent) {
  const auto gait = GaitSchedule::from_targets(8.0);
  const double h = 1e-6;
  for (double t : {0.0, 0.03, 0.1}) {
    EXPECT_NEAR(((gait.at(t + h).q - gait.at(t - h).q) / (2 * h) - gait.at(t).qd).norm(), 0.0, 1e-5);
    EXPECT_NEAR(((gait.at(t + h).qd - gait.at(t - h).qd) / (2 * h) - gait.at(t).qdd).norm(), 0.0, 1e-2);
  }
  EXPECT_NEAR((gait.at(0.02).q - gait.at(0.02 + 1.0 / 8.0).q).norm(), 0.0, 1e-10);
}

TEST(Coupled, PackRoundTrip) {
  CoupledModels m;
  aero::AeroParams ap;
  ap.fourier_terms = 4;
  m.aero = std::make_shared<aero::AeroModel>(aero::WingGeometry::tapered(4), ap);
  auto s = perturbed(m);
  s.aero_left.fourier_a.setConstant(0.1);
  const auto x = pack(s);
  EXPECT_EQ(x.size(), s.size());
  EXPECT_NEAR((pack(unpack(x, s)) - x).norm(), 0.0, 0.0);
}

TEST(Coupled, StaticHangIsEquilibrium) {
  const CoupledModels m;
  auto s = CoupledState::initial(m);
  s.aerobat.position = static_hang_offset(m);
  const auto w = suspension_wrench(s.guard, s.aerobat, m.suspension, m.aerobat.total_mass(), m.guard.gravity);
  EXPECT_NEAR((w.force_on_aerobat + w.gravity_on_aerobat).norm(), 0.0, 1e-9);
  // Pretension is split so the weight is carried close to the centre.
  EXPECT_LT(s.aerobat.position.norm(), 1e-3);
  // With motors carrying both bodies the guard does not accelerate.
  const double each = (m.guard.mass + m.aerobat.total_mass()) * m.guard.gravity / 6.0;
  const auto d = coupled_derivatives(s, {each, each, each, each, each, each}, m);
  EXPECT_NEAR(d.segment<3>(3).norm(), 0.0, 1e-9);
}

TEST(Coupled, MomentumConservedWithoutGravity) {
  CoupledModels m = conservative_models();
  m.guard.gravity = 0.0;
  m.gait = GaitSchedule::from_targets(m.aerobat.flapping_frequency);
  auto s = perturbed(m);
  const Vector3d p0 = total_momentum(s, m);
  for (int k = 0; k < 2000; ++k) s = sim::step_coupled(s, {}, m, 2.5e-4);
  EXPECT_NEAR((total_momentum(s, m) - p0).norm(), 0.0, 1e-9);
}

TEST(Coupled, EnergyConservedWithFrozenGait) {
  const CoupledModels m = conservative_models();
  auto s = perturbed(m);
  const double e0 = total_energy(s, m);
  double worst = 0.0;
  for (int k = 0; k < 4000; ++k) {
    s = sim::step_coupled(s, {}, m, 2.5e-4);
    worst = std::max(worst, std::abs(total_energy(s, m) - e0));
  }
  // Relative to the peak kinetic energy scale of the motion.
  EXPECT_LT(worst, 1e-6);
}

TEST(Coupled, DampingDissipates) {
  CoupledModels m;
  m.suspension.damping = 0.1;
  m.guard.gravity = 0.0;
  auto s = perturbed(m);
  const double e0 = total_energy(s, m);
  for (int k = 0; k < 2000; ++k) s = sim::step_coupled(s, {}, m, 2.5e-4);
  EXPECT_LT(total_energy(s, m), e0);
}
