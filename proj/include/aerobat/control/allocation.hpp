#pragma once

#include <Eigen/Core>

#include "aerobat/dynamics/guard.hpp"
#include "aerobat/errors.hpp"

namespace aerobat::control {

// (collective force, m_x, m_y, m_z)
using Wrench4 = Eigen::Vector4d;

struct AllocationResult {
  dynamics::MotorForces forces{};
  Wrench4 achieved = Wrench4::Zero();
  Wrench4 residual = Wrench4::Zero();  // desired - achieved
  bool saturated = false;              // at least one motor pinned at a bound
  bool feasible = true;                // desired wrench reproduced within tolerance
};

class InfeasibleWrench : public Error {
public:
  InfeasibleWrench(const std::string& what, AllocationResult best)
      : Error(what), best_(best) {}
  const AllocationResult& best() const { return best_; }
  const Wrench4& achievable() const { return best_.achieved; }
  const Wrench4& residual() const { return best_.residual; }

private:
  AllocationResult best_;
};

// Minimum-norm motor forces for the wrench, then motors that leave [0, f_max]
// are pinned at the violated bound and the rest re-solved for what remains.
// Never throws; check `feasible`.
AllocationResult allocate(const Wrench4& desired, const dynamics::GuardParams& p, double f_max,
                          double tolerance = 1e-9);

// As allocate(), but throws InfeasibleWrench when the wrench cannot be met.
dynamics::MotorForces allocate_motors(const Wrench4& desired, const dynamics::GuardParams& p,
                                      double f_max, double tolerance = 1e-9);

}  // namespace aerobat::control
