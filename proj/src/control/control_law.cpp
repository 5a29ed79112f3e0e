#include "aerobat/control/control_law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "aerobat/angles.hpp"
#include "aerobat/dynamics/rigid_body.hpp"

namespace aerobat::control {

using dynamics::Matrix3d;
using dynamics::Vector3d;

ModelTerms guard_model_terms(const Vector6d& x1, const Vector6d& x2, const dynamics::GuardParams& p) {
  const Vector3d angles = x1.tail<3>();
  const Matrix3d w = dynamics::euler_rate_matrix(angles);
  const Matrix3d w_dot = dynamics::euler_rate_matrix_dot(angles, x2.tail<3>());
  const Vector3d omega = w.fullPivLu().solve(x2.tail<3>());
  const Matrix3d j_inv = p.inertia.inverse();
  const Matrix3d wj = w * j_inv;
  const Matrix3d r = dynamics::from_euler_zyx(angles).toRotationMatrix();

  ModelTerms t;
  t.g1.head<3>() = Vector3d(0.0, 0.0, -p.gravity);
  t.g1.tail<3>() = w_dot * omega - wj * omega.cross(p.inertia * omega);
  const auto a = dynamics::allocation_matrix(p);
  for (int i = 0; i < 6; ++i) t.g2.block<3, 1>(0, i) = r.col(2) / p.mass;
  t.g2.bottomRows<3>() = wj * a.bottomRows<3>();
  t.g3.setZero();
  t.g3.topLeftCorner<3, 3>() = Matrix3d::Identity() / p.mass;
  t.g3.bottomRightCorner<3, 3>() = wj;
  return t;
}

Vector6d hover_g3_diagonal(const dynamics::GuardParams& p) {
  Vector6d d;
  d.head<3>().setConstant(1.0 / p.mass);
  d.tail<3>() = p.inertia.inverse().diagonal();
  return d;
}

Eigen::VectorXd feedback_linearize(const Eigen::VectorXd& u0, const Eigen::VectorXd& g1,
                                   const Eigen::MatrixXd& g2, const Eigen::MatrixXd& g3,
                                   const Eigen::VectorXd& x3) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g2, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cond = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : INFINITY;
  if (g2.rows() != g2.cols() || !(cond <= 1e8)) {
    std::ostringstream os;
    os << "input map is ill-conditioned (condition number " << cond << ")";
    throw IllConditioned(os.str());
  }
  return svd.solve(u0 - g1 - g3 * x3);
}

ControlOutput control_law(const ObserverState& obs, const Vector6d& setpoint, const ControlLaw& law,
                          const dynamics::GuardParams& p) {
  const ModelTerms terms = guard_model_terms(obs.x1, obs.x2, p);
  const Vector6d x3 = law.cancel_disturbance ? obs.x3 : Vector6d::Zero();
  const Vector6d disturbance = terms.g3 * x3;
  const bool pose = law.mode == FeedbackMode::PoseAndVelocity;

  ControlOutput out;
  // Translation: acceleration the thrust vector must supply.
  const Vector3d pos_err = obs.x1.head<3>() - setpoint.head<3>();
  out.u0.head<3>() = -law.kd.head<3>().cwiseProduct(obs.x2.head<3>());
  if (pose) out.u0.head<3>() -= law.kp.head<3>().cwiseProduct(pos_err);
  const Vector3d thrust = p.mass * (out.u0.head<3>() - terms.g1.head<3>() - disturbance.head<3>());

  const double yaw = obs.x1[5];
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double tz = std::max(thrust.z(), 1e-6);
  out.tilt_reference = {
      std::clamp(std::atan2(thrust.x() * sy - thrust.y() * cy, tz), -law.max_tilt, law.max_tilt),
      std::clamp(std::atan2(thrust.x() * cy + thrust.y() * sy, tz), -law.max_tilt, law.max_tilt)};

  // Attitude: track the tilt reference and the yaw setpoint.
  const Vector3d att_ref(out.tilt_reference[0], out.tilt_reference[1], setpoint[5]);
  Vector3d att_err;
  for (int i = 0; i < 3; ++i) att_err[i] = wrap_pi(obs.x1[3 + i] - att_ref[i]);
  out.u0.tail<3>() = -law.kd.tail<3>().cwiseProduct(obs.x2.tail<3>());
  if (pose) out.u0.tail<3>() -= law.kp.tail<3>().cwiseProduct(att_err);

  // Cancel on the controlled subspace (collective along body z, three moments).
  const Matrix3d r = dynamics::from_euler_zyx(obs.x1.tail<3>()).toRotationMatrix();
  Eigen::Matrix4d g2w = Eigen::Matrix4d::Zero();
  g2w(0, 0) = 1.0 / p.mass;
  g2w.bottomRightCorner<3, 3>() = terms.g3.bottomRightCorner<3, 3>();
  Eigen::Vector4d u0w, g1w, x3w;
  u0w << r.col(2).dot(thrust) / p.mass, out.u0.tail<3>();
  g1w << 0.0, terms.g1.tail<3>();
  x3w << 0.0, x3.tail<3>();
  Eigen::Matrix4d g3w = Eigen::Matrix4d::Zero();
  g3w.bottomRightCorner<3, 3>() = terms.g3.bottomRightCorner<3, 3>();
  out.wrench = feedback_linearize(u0w, g1w, g2w, g3w, x3w);
  out.wrench[0] = std::max(out.wrench[0], 0.0);
  return out;
}

}  // namespace aerobat::control
