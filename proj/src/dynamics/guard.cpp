#include "aerobat/dynamics/guard.hpp"

#include <cmath>

#include "aerobat/angles.hpp"

namespace aerobat::dynamics {

namespace {

// Inertia about the origin of a point mass at r.
Matrix3d point_inertia(double m, const Vector3d& r) {
  return m * (r.squaredNorm() * Matrix3d::Identity() - r * r.transpose());
}

// Thin elliptical loop with semi-axes a (along e1) and b (along e2), mass spread
// uniformly by arc length; integrated numerically.
Matrix3d loop_inertia(double mass, double a, double b, const Vector3d& e1, const Vector3d& e2) {
  constexpr int kSegments = 720;
  double total_length = 0.0;
  std::array<double, kSegments> ds{};
  for (int k = 0; k < kSegments; ++k) {
    const double t = kTwoPi * (k + 0.5) / kSegments;
    ds[k] = std::hypot(a * std::sin(t), b * std::cos(t)) * kTwoPi / kSegments;
    total_length += ds[k];
  }
  Matrix3d j = Matrix3d::Zero();
  for (int k = 0; k < kSegments; ++k) {
    const double t = kTwoPi * (k + 0.5) / kSegments;
    const Vector3d r = a * std::cos(t) * e1 + b * std::sin(t) * e2;
    j += point_inertia(mass * ds[k] / total_length, r);
  }
  return j;
}

}  // namespace

GuardParams GuardParams::from_geometry(const GuardGeometry& g) {
  GuardParams p;
  const Vector3d ex = Vector3d::UnitX(), ey = Vector3d::UnitY(), ez = Vector3d::UnitZ();
  const double loop_mass = g.rod_mass / 3.0;
  Matrix3d j = loop_inertia(loop_mass, g.semi_axis_x, g.semi_axis_y, ex, ey) +
               loop_inertia(loop_mass, g.semi_axis_y, g.semi_axis_z, ey, ez) +
               loop_inertia(loop_mass, g.semi_axis_x, g.semi_axis_z, ex, ez);
  const std::array<Vector3d, 6> motors = {Vector3d(g.arm_y, 0, 0),  Vector3d(0, -g.arm_x, 0),
                                          Vector3d(-g.arm_y, 0, 0), Vector3d(0, g.arm_x, 0),
                                          Vector3d(0, -g.arm_z, 0), Vector3d(0, g.arm_z, 0)};
  for (const auto& r : motors) j += point_inertia(g.motor_mass, r);
  p.mass = g.rod_mass + g.electronics_mass + 6.0 * g.motor_mass;
  p.inertia = j;
  p.arm_x = g.arm_x;
  p.arm_y = g.arm_y;
  p.arm_z = g.arm_z;
  return p;
}

Eigen::Matrix<double, 4, 6> allocation_matrix(const GuardParams& p) {
  Eigen::Matrix<double, 4, 6> m;
  m << 1, 1, 1, 1, 1, 1,
       0, -p.arm_x, 0, p.arm_x, 0, 0,
       -p.arm_y, 0, p.arm_y, 0, 0, 0,
       0, 0, 0, 0, -p.arm_z, p.arm_z;
  return m;
}

Eigen::Vector4d motor_wrench(const MotorForces& f, const GuardParams& p) {
  return allocation_matrix(p) * Eigen::Map<const Eigen::Matrix<double, 6, 1>>(f.data());
}

BodyWrench body_wrench(const MotorForces& f, const GuardParams& p, const Vector3d& fe,
                       const Vector3d& me) {
  BodyWrench w;
  w.force = Vector3d(0.0, 0.0, f[0] + f[1] + f[2] + f[3] + f[4] + f[5]) + fe;
  w.moment = Vector3d(p.arm_x * (f[3] - f[1]), p.arm_y * (f[2] - f[0]), p.arm_z * (f[5] - f[4])) + me;
  return w;
}

RigidBodyDerivative guard_derivatives(const RigidBodyState& s, const BodyWrench& w,
                                      const GuardParams& p) {
  RigidBodyDerivative d;
  d.velocity = s.velocity;
  d.acceleration = Vector3d(0.0, 0.0, -p.gravity) + s.rotation() * w.force / p.mass;
  d.quaternion_rate = quaternion_rate(s.orientation, s.omega);
  d.omega_rate = p.inertia.ldlt().solve(w.moment - s.omega.cross(p.inertia * s.omega));
  return d;
}

double kinetic_energy(const RigidBodyState& s, double mass, const Matrix3d& inertia) {
  return 0.5 * mass * s.velocity.squaredNorm() + 0.5 * s.omega.dot(inertia * s.omega);
}

}  // namespace aerobat::dynamics
