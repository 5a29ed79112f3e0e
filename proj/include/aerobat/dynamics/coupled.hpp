#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "aerobat/aero/strip_model.hpp"
#include "aerobat/angles.hpp"
#include "aerobat/dynamics/aerobat_rom.hpp"
#include "aerobat/dynamics/guard.hpp"
#include "aerobat/dynamics/suspension.hpp"

namespace aerobat::dynamics {

// Everything the coupled right-hand side needs besides the state.
struct CoupledModels {
  GuardParams guard = GuardParams::defaults();
  AerobatParams aerobat;
  SuspensionParams suspension = SuspensionParams::defaults();
  GaitSchedule gait = GaitSchedule::fixed(0.0, kPi);
  // Shared so scenario sweeps can reuse one assembled model; empty disables aero.
  std::shared_ptr<const aero::AeroModel> aero;
};

struct CoupledState {
  RigidBodyState guard;
  RigidBodyState aerobat;  // world frame; see relative_pose() for the guard-relative view
  aero::AeroState aero_left;
  aero::AeroState aero_right;
  double time = 0.0;

  // Zero aero states sized for the models (empty when aero is disabled).
  static CoupledState initial(const CoupledModels& models);
  int size() const;
};

Eigen::VectorXd pack(const CoupledState& s);
// Layout of `like` determines the aero state sizes.
CoupledState unpack(const Eigen::Ref<const Eigen::VectorXd>& x, const CoupledState& like);

// Intermediate quantities at one evaluation of the right-hand side.
struct CoupledOutputs {
  JointTrajectory gait;
  SuspensionWrench suspension;
  BodyWrench guard_wrench;      // body frame, motors + bands
  Vector3d aero_force = Vector3d::Zero();   // Aerobat frame, both wings
  Vector3d aero_moment = Vector3d::Zero();
  Eigen::VectorXd y1_left, y1_right;
  aero::StripForcing forcing_left, forcing_right;
};

// Relative flow at every strip of one wing, split into body and flapping parts.
struct WingFlow {
  std::vector<aero::StripFlow> total, body, flapping;
};
WingFlow wing_flow(const RigidBodyState& aerobat, const JointTrajectory& gait, int side,
                   const aero::AeroModel& model, const AerobatParams& p);

// Time derivative of the packed state. Aerodynamic forces act on the Aerobat
// and reach the guard only through the bands.
Eigen::VectorXd coupled_derivatives(const CoupledState& s, const MotorForces& motors,
                                    const CoupledModels& models,
                                    CoupledOutputs* outputs = nullptr);

// Linear momentum of guard plus every Aerobat mass, world frame.
Vector3d total_momentum(const CoupledState& s, const CoupledModels& models);
// Kinetic energy of both bodies plus band and gravitational potential.
double total_energy(const CoupledState& s, const CoupledModels& models);

// Aerobat position (guard frame, both bodies level) at which the bands carry
// its full weight. Newton iteration; throws std::runtime_error
// if it fails to converge.
Vector3d static_hang_offset(const CoupledModels& models);

}  // namespace aerobat::dynamics
