#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace aerobat::dynamics {

using Eigen::Matrix3d;
using Eigen::Quaterniond;
using Eigen::Vector3d;

// Pose and twist of a rigid body. Orientation maps body to world; angular
// velocity is expressed in the body frame.
struct RigidBodyState {
  Vector3d position = Vector3d::Zero();
  Vector3d velocity = Vector3d::Zero();
  Quaterniond orientation = Quaterniond::Identity();
  Vector3d omega = Vector3d::Zero();

  Matrix3d rotation() const { return orientation.toRotationMatrix(); }
};

struct RigidBodyDerivative {
  Vector3d velocity = Vector3d::Zero();
  Vector3d acceleration = Vector3d::Zero();
  Eigen::Vector4d quaternion_rate = Eigen::Vector4d::Zero();  // (w, x, y, z)
  Vector3d omega_rate = Vector3d::Zero();
};

inline constexpr int kRigidBodySize = 13;

// Layout: position(3) velocity(3) quaternion w,x,y,z(4) omega(3).
void pack(const RigidBodyState& s, Eigen::Ref<Eigen::VectorXd> out);
RigidBodyState unpack_rigid_body(const Eigen::Ref<const Eigen::VectorXd>& in);
void pack(const RigidBodyDerivative& d, Eigen::Ref<Eigen::VectorXd> out);

// q_dot = 0.5 q (0, omega).
Eigen::Vector4d quaternion_rate(const Quaterniond& q, const Vector3d& omega_body);

Matrix3d skew(const Vector3d& v);

// Z-Y-X (yaw-pitch-roll) Euler angles returned as (roll, pitch, yaw).
Vector3d euler_zyx(const Quaterniond& q);
Quaterniond from_euler_zyx(const Vector3d& roll_pitch_yaw);

// Euler angle rates = W * body angular velocity.
Matrix3d euler_rate_matrix(const Vector3d& roll_pitch_yaw);
// d/dt of W along the given Euler rates.
Matrix3d euler_rate_matrix_dot(const Vector3d& roll_pitch_yaw, const Vector3d& euler_rates);

}  // namespace aerobat::dynamics
