#pragma once

#include <array>

#include "aerobat/dynamics/rigid_body.hpp"

namespace aerobat::dynamics {

inline constexpr double kGravity = 9.8;

using MotorForces = std::array<double, 6>;

// Dimensions used to estimate the guard's mass properties: three orthogonal
// elliptical carbon loops plus point masses for electronics and motors.
struct GuardGeometry {
  double semi_axis_x = 0.15;   // m, half of the 300 mm rods
  double semi_axis_y = 0.20;   // m, half of the 400 mm rods (major axis)
  double semi_axis_z = 0.15;
  double rod_mass = 0.0066;    // kg, all loops together
  double electronics_mass = 0.0252;
  double motor_mass = 0.0047;  // kg each, six motors on the loops
  double arm_x = 0.15;         // roll arm L_x (motors 2, 4 on -y/+y)
  double arm_y = 0.15;         // pitch arm L_y (motors 1, 3 on +x/-x)
  double arm_z = 0.20;         // yaw arm L_z (motors 5, 6 on the major axis)
};

struct GuardParams {
  double mass = 0.060;
  Matrix3d inertia = Matrix3d::Identity() * 1e-4;
  double arm_x = 0.15;
  double arm_y = 0.15;
  double arm_z = 0.20;
  double gravity = kGravity;

  // Mass and inertia from GuardGeometry.
  static GuardParams from_geometry(const GuardGeometry& g);
  static GuardParams defaults() { return from_geometry(GuardGeometry{}); }
};

// Body-frame force and moment on the guard.
struct BodyWrench {
  Vector3d force = Vector3d::Zero();
  Vector3d moment = Vector3d::Zero();
};

// Thrust of all six motors along body z plus the suspension force f_e (body
// frame); roll, pitch and yaw moments from the differential pairs plus m_e.
BodyWrench body_wrench(const MotorForces& f, const GuardParams& p,
                       const Vector3d& suspension_force = Vector3d::Zero(),
                       const Vector3d& suspension_moment = Vector3d::Zero());

// Collective force and the three moments produced by the motors alone.
Eigen::Vector4d motor_wrench(const MotorForces& f, const GuardParams& p);

// Rows map motor forces to (f, m_x, m_y, m_z).
Eigen::Matrix<double, 4, 6> allocation_matrix(const GuardParams& p);

// Newton-Euler for the guard under a body-frame wrench and gravity.
RigidBodyDerivative guard_derivatives(const RigidBodyState& s, const BodyWrench& w,
                                      const GuardParams& p);

double kinetic_energy(const RigidBodyState& s, double mass, const Matrix3d& inertia);

}  // namespace aerobat::dynamics
