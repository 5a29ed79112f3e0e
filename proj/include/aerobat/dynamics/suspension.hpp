#pragma once

#include <vector>

#include "aerobat/dynamics/rigid_body.hpp"

namespace aerobat::dynamics {

// A rubber band between a point on the guard (guard frame) and a point on the
// Aerobat body (Aerobat frame). It pulls when stretched past rest length and
// goes slack otherwise.
struct Band {
  Vector3d guard_point = Vector3d::Zero();
  Vector3d aerobat_point = Vector3d::Zero();
  double rest_length = 0.0;
};

struct SuspensionParams {
  double stiffness = 45.0;  // N/m per band
  double damping = 0.0;     // N s/m along the band, taut only
  std::vector<Band> bands;

  // Four bands to the upper half of the guard and four to the lower half,
  // stretched by the given amounts with the Aerobat at the guard centre.
  static SuspensionParams defaults(double upper_stretch = 0.006, double lower_stretch = 0.003);
  // Throws std::invalid_argument on a broken invariant.
  void validate(double semi_x = 0.15, double semi_y = 0.20, double semi_z = 0.15) const;
};

struct SuspensionWrench {
  Vector3d force_on_guard = Vector3d::Zero();     // world frame
  Vector3d moment_on_guard = Vector3d::Zero();    // guard frame, about guard origin
  Vector3d force_on_aerobat = Vector3d::Zero();   // world frame, bands only
  Vector3d moment_on_aerobat = Vector3d::Zero();  // Aerobat frame, about its origin
  Vector3d gravity_on_aerobat = Vector3d::Zero(); // world frame
  std::vector<double> tensions;
};

// Band forces on both bodies (equal and opposite) and the Aerobat's weight.
SuspensionWrench suspension_wrench(const RigidBodyState& guard, const RigidBodyState& aerobat,
                                   const SuspensionParams& params, double aerobat_mass,
                                   double gravity);

// Band strain energy plus the Aerobat's gravitational potential.
double suspension_potential(const RigidBodyState& guard, const RigidBodyState& aerobat,
                            const SuspensionParams& params, double aerobat_mass, double gravity);

}  // namespace aerobat::dynamics
