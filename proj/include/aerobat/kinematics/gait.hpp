#pragma once

#include <vector>

namespace aerobat::kinematics {

enum class ElbowTargetForm {
  // Skewed sinusoid scaled so its extrema are 120 deg +/- 45 deg.
  Normalized,
  // Coefficients as printed: -0.5 * atan(.) [rad] * 45 deg + 120 deg.
  Literal,
};

// Target shoulder/elbow angles (radians) at a flapping phase.
struct GaitTargets {
  double phase = 0.0;
  double theta_s_hat = 0.0;
  double theta_e_hat = 0.0;
};

// Phase is wrapped into [0, 2*pi) before evaluation.
GaitTargets target_gait(double phi, ElbowTargetForm form = ElbowTargetForm::Normalized);

// N uniformly spaced phases on [0, 2*pi).
std::vector<GaitTargets> sample_target_gait(int n, ElbowTargetForm form = ElbowTargetForm::Normalized);

}  // namespace aerobat::kinematics
