#pragma once

#include <array>
#include <complex>
#include <functional>

#include <Eigen/Core>

namespace aerobat::control {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

// x1 = (position, roll/pitch/yaw), x2 = d/dt x1, x3 = external wrench
// (world force, body moment) acting through g3.
struct ExtendedState {
  Vector6d x1 = Vector6d::Zero();
  Vector6d x2 = Vector6d::Zero();
  Vector6d x3 = Vector6d::Zero();

  bool finite() const { return x1.allFinite() && x2.allFinite() && x3.allFinite(); }
};

using ObserverState = ExtendedState;

struct ObserverGains {
  Matrix6d beta1 = Matrix6d::Zero();
  Matrix6d beta2 = Matrix6d::Zero();
  Matrix6d beta3 = Matrix6d::Zero();
};

// Model terms of x2_dot = g1 + g2 u + g3 x3, held over one observer step.
struct ModelTerms {
  Vector6d g1 = Vector6d::Zero();
  Matrix6d g2 = Matrix6d::Zero();
  Matrix6d g3 = Matrix6d::Identity();
};

using Poles = std::array<std::complex<double>, 3>;

// Gains giving each axis the characteristic polynomial with roots `poles`,
// assuming g3 acts diagonally with gains `g3_diagonal`. Complex poles must
// come in conjugate pairs. Throws UnstablePoleRequest for Re(p) >= 0.
ObserverGains place_observer_poles(const Poles& poles, const Vector6d& g3_diagonal);
ObserverGains place_observer_poles(double triple_pole, const Vector6d& g3_diagonal);

// Per-axis estimation-error matrix acting on (e1, e2, e3).
Eigen::Matrix3d error_matrix(const ObserverGains& gains, int axis, double g3);
// Full 18x18 error matrix for a diagonal g3.
Eigen::MatrixXd error_matrix(const ObserverGains& gains, const Vector6d& g3_diagonal);

// One RK4 step of the extended-state observer. `measurement(t)` supplies x1
// anywhere inside [t, t + dt]. Throws std::invalid_argument for dt <= 0.
ObserverState observer_step(const ObserverState& obs, const std::function<Vector6d(double)>& measurement,
                            double t, const Vector6d& u, const ModelTerms& terms,
                            const ObserverGains& gains, double dt);
// First-order hold between the measurements at the step's ends.
ObserverState observer_step(const ObserverState& obs, const Vector6d& x1_begin,
                            const Vector6d& x1_end, const Vector6d& u, const ModelTerms& terms,
                            const ObserverGains& gains, double dt);

}  // namespace aerobat::control
