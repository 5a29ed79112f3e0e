#include "aerobat/kinematics/gait.hpp"

#include <cmath>

#include "aerobat/angles.hpp"

namespace aerobat::kinematics {

namespace {

// atan of the skew quotient; bounded by asin(0.5) = pi/6 in magnitude.
double skew_term(double phi) {
  const double x = phi + 2.0 * kPi / 3.0;
  return std::atan2(-0.5 * std::sin(x), 1.0 + 0.5 * std::cos(x));
}

}  // namespace

GaitTargets target_gait(double phi, ElbowTargetForm form) {
  const double p = wrap_2pi(phi);
  GaitTargets g;
  g.phase = p;
  g.theta_s_hat = deg2rad(35.0) * std::sin(p) - deg2rad(10.0);
  const double skew = skew_term(p);
  switch (form) {
    case ElbowTargetForm::Normalized:
      g.theta_e_hat = -(skew / std::asin(0.5)) * deg2rad(45.0) + deg2rad(120.0);
      break;
    case ElbowTargetForm::Literal:
      g.theta_e_hat = -0.5 * skew * deg2rad(45.0) + deg2rad(120.0);
      break;
  }
  return g;
}

std::vector<GaitTargets> sample_target_gait(int n, ElbowTargetForm form) {
  std::vector<GaitTargets> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.push_back(target_gait(kTwoPi * k / n, form));
  return out;
}

}  // namespace aerobat::kinematics
