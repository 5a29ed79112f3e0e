#pragma once

#include <span>

namespace aerobat::kinematics {

// Coefficient of determination 1 - SS_res/SS_tot, SS_tot about the target mean.
// Throws DegenerateTarget for constant targets, std::invalid_argument for a
// length mismatch or fewer than two samples.
double r_squared(std::span<const double> actual, std::span<const double> target);

}  // namespace aerobat::kinematics
