#include "aerobat/dynamics/rigid_body.hpp"

#include <algorithm>
#include <cmath>

namespace aerobat::dynamics {

void pack(const RigidBodyState& s, Eigen::Ref<Eigen::VectorXd> out) {
  out.segment<3>(0) = s.position;
  out.segment<3>(3) = s.velocity;
  out[6] = s.orientation.w();
  out[7] = s.orientation.x();
  out[8] = s.orientation.y();
  out[9] = s.orientation.z();
  out.segment<3>(10) = s.omega;
}

RigidBodyState unpack_rigid_body(const Eigen::Ref<const Eigen::VectorXd>& in) {
  RigidBodyState s;
  s.position = in.segment<3>(0);
  s.velocity = in.segment<3>(3);
  s.orientation = Quaterniond(in[6], in[7], in[8], in[9]);
  s.omega = in.segment<3>(10);
  return s;
}

void pack(const RigidBodyDerivative& d, Eigen::Ref<Eigen::VectorXd> out) {
  out.segment<3>(0) = d.velocity;
  out.segment<3>(3) = d.acceleration;
  out.segment<4>(6) = d.quaternion_rate;
  out.segment<3>(10) = d.omega_rate;
}

Eigen::Vector4d quaternion_rate(const Quaterniond& q, const Vector3d& w) {
  const Quaterniond dq = q * Quaterniond(0.0, w.x(), w.y(), w.z());
  return 0.5 * Eigen::Vector4d(dq.w(), dq.x(), dq.y(), dq.z());
}

Matrix3d skew(const Vector3d& v) {
  Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

Vector3d euler_zyx(const Quaterniond& q) {
  const Matrix3d r = q.normalized().toRotationMatrix();
  const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  const double roll = std::atan2(r(2, 1), r(2, 2));
  const double yaw = std::atan2(r(1, 0), r(0, 0));
  return {roll, pitch, yaw};
}

Quaterniond from_euler_zyx(const Vector3d& e) {
  return Quaterniond(Eigen::AngleAxisd(e.z(), Vector3d::UnitZ()) *
                     Eigen::AngleAxisd(e.y(), Vector3d::UnitY()) *
                     Eigen::AngleAxisd(e.x(), Vector3d::UnitX()));
}

Matrix3d euler_rate_matrix(const Vector3d& e) {
  const double sr = std::sin(e.x()), cr = std::cos(e.x());
  const double tp = std::tan(e.y()), cp = std::cos(e.y());
  Matrix3d w;
  w << 1.0, sr * tp, cr * tp,
       0.0, cr, -sr,
       0.0, sr / cp, cr / cp;
  return w;
}

Matrix3d euler_rate_matrix_dot(const Vector3d& e, const Vector3d& rates) {
  const double sr = std::sin(e.x()), cr = std::cos(e.x());
  const double sp = std::sin(e.y()), cp = std::cos(e.y());
  const double tp = sp / cp;
  const double sec2 = 1.0 / (cp * cp);
  const double dr = rates.x(), dp = rates.y();
  Matrix3d wd;
  wd << 0.0, cr * tp * dr + sr * sec2 * dp, -sr * tp * dr + cr * sec2 * dp,
        0.0, -sr * dr, -cr * dr,
        0.0, (cr * dr + sr * tp * dp) / cp, (-sr * dr + cr * tp * dp) / cp;
  return wd;
}

}  // namespace aerobat::dynamics
