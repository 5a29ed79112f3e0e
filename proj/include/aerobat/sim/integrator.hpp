#pragma once

#include <string_view>

#include "aerobat/dynamics/coupled.hpp"

namespace aerobat::sim {

enum class Integrator { Rk4, SemiImplicitEuler };

Integrator parse_integrator(std::string_view name);
std::string_view to_string(Integrator i);

// Components of any state above this magnitude count as divergence.
inline constexpr double kBlowupThreshold = 1e6;

// Advances the coupled system by dt with motor forces held over the step.
// Quaternions are renormalized afterwards. Throws NumericalBlowup on a
// non-finite or runaway state.
dynamics::CoupledState step_coupled(const dynamics::CoupledState& s,
                                    const dynamics::MotorForces& motors,
                                    const dynamics::CoupledModels& models, double dt,
                                    Integrator integrator = Integrator::Rk4);

// Throws NumericalBlowup naming `what` when x is non-finite or too large.
void check_finite(const Eigen::Ref<const Eigen::VectorXd>& x, double t, std::string_view what);

}  // namespace aerobat::sim
