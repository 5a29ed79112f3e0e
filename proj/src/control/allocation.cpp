#include "aerobat/control/allocation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

namespace aerobat::control {

AllocationResult allocate(const Wrench4& desired, const dynamics::GuardParams& p, double f_max,
                          double tolerance) {
  const Eigen::Matrix<double, 4, 6> a = dynamics::allocation_matrix(p);
  Eigen::Matrix<double, 6, 1> f = Eigen::Matrix<double, 6, 1>::Zero();
  std::array<bool, 6> pinned{};

  // Each pass pins at least one more motor, so six passes suffice.
  for (int pass = 0; pass <= 6; ++pass) {
    std::vector<int> free;
    for (int i = 0; i < 6; ++i)
      if (!pinned[static_cast<std::size_t>(i)]) free.push_back(i);
    if (free.empty()) break;

    Wrench4 remaining = desired;
    for (int i = 0; i < 6; ++i)
      if (pinned[static_cast<std::size_t>(i)]) remaining -= a.col(i) * f[i];
    Eigen::MatrixXd a_free(4, static_cast<Eigen::Index>(free.size()));
    for (std::size_t k = 0; k < free.size(); ++k) a_free.col(static_cast<Eigen::Index>(k)) = a.col(free[k]);
    const Eigen::VectorXd x = a_free.completeOrthogonalDecomposition().solve(remaining);

    bool violated = false;
    for (std::size_t k = 0; k < free.size(); ++k) {
      const int i = free[k];
      f[i] = x[static_cast<Eigen::Index>(k)];
      if (f[i] < 0.0 || f[i] > f_max) {
        f[i] = std::clamp(f[i], 0.0, f_max);
        pinned[static_cast<std::size_t>(i)] = true;
        violated = true;
      }
    }
    if (!violated) break;
  }

  AllocationResult r;
  for (int i = 0; i < 6; ++i) {
    r.forces[static_cast<std::size_t>(i)] = std::clamp(f[i], 0.0, f_max);
    r.saturated = r.saturated || pinned[static_cast<std::size_t>(i)];
  }
  r.achieved = dynamics::motor_wrench(r.forces, p);
  r.residual = desired - r.achieved;
  r.feasible = r.residual.norm() <= tolerance * (1.0 + desired.norm());
  return r;
}

dynamics::MotorForces allocate_motors(const Wrench4& desired, const dynamics::GuardParams& p,
                                      double f_max, double tolerance) {
  AllocationResult r = allocate(desired, p, f_max, tolerance);
  if (!r.feasible) {
    std::ostringstream os;
    os << "wrench (" << desired.transpose() << ") exceeds motor limits; residual norm "
       << r.residual.norm();
    throw InfeasibleWrench(os.str(), r);
  }
  return r.forces;
}

}  // namespace aerobat::control
