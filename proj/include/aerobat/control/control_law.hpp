#pragma once

#include "aerobat/control/allocation.hpp"
#include "aerobat/control/observer.hpp"
#include "aerobat/dynamics/guard.hpp"

namespace aerobat::control {

enum class FeedbackMode {
  // PD on pose error and velocity.
  PoseAndVelocity,
  // Damping on x2 only.
  VelocityOnly,
};

struct ControlLaw {
  Vector6d kp = (Vector6d() << 36, 36, 36, 400, 400, 400).finished();
  Vector6d kd = (Vector6d() << 12, 12, 12, 40, 40, 40).finished();
  FeedbackMode mode = FeedbackMode::PoseAndVelocity;
  double f_max = 0.30;             // N per motor
  double max_tilt = 0.35;          // rad, cap on commanded roll/pitch
  bool cancel_disturbance = true;  // false forces x3_hat := 0 in the law
};

// Model terms of the guard at (x1, x2): g1 = gravity and gyroscopic terms,
// g2 = motor forces to (linear, Euler-angle) acceleration, g3 = external
// wrench to the same.
ModelTerms guard_model_terms(const Vector6d& x1, const Vector6d& x2, const dynamics::GuardParams& p);
// Diagonal of g3 at level attitude, used for observer pole placement.
Vector6d hover_g3_diagonal(const dynamics::GuardParams& p);

// g2^-1 (u0 - g1 - g3 x3) for square g2. Throws IllConditioned when
// cond(g2) > 1e8.
Eigen::VectorXd feedback_linearize(const Eigen::VectorXd& u0, const Eigen::VectorXd& g1,
                                   const Eigen::MatrixXd& g2, const Eigen::MatrixXd& g3,
                                   const Eigen::VectorXd& x3);

struct ControlOutput {
  Wrench4 wrench = Wrench4::Zero();  // (f, m_x, m_y, m_z) requested from the motors
  Vector6d u0 = Vector6d::Zero();    // commanded (linear, Euler-angle) acceleration
  Eigen::Vector2d tilt_reference = Eigen::Vector2d::Zero();  // roll, pitch
};

// Feedback-linearizing hover law on the estimate. Thrust acts along body z,
// so horizontal position is held through a roll/pitch reference.
ControlOutput control_law(const ObserverState& obs, const Vector6d& setpoint, const ControlLaw& law,
                          const dynamics::GuardParams& p);

}  // namespace aerobat::control
