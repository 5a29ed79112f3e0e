#pragma once

#include <span>
#include <vector>

#include "aerobat/dynamics/rigid_body.hpp"
#include "aerobat/kinematics/gait.hpp"
#include "aerobat/kinematics/linkage.hpp"

namespace aerobat::dynamics {

struct AerobatParams {
  double body_mass = 0.035;      // kg
  double proximal_mass = 0.002;  // kg per side, at the humerus midpoint
  double distal_mass = 0.003;    // kg per side, at the radius midpoint
  double humerus_length = 0.050;
  double radius_length = 0.090;
  double shoulder_offset = 0.010;  // shoulder pivots at (0, +/-offset, 0)
  Vector3d body_inertia{1.0e-5, 3.0e-5, 3.0e-5};  // principal, about the body origin
  double flapping_frequency = 8.0;  // Hz

  double total_mass() const { return body_mass + 2.0 * (proximal_mass + distal_mass); }
  double arm_length() const { return humerus_length + radius_length; }
  // Throws std::invalid_argument on a broken invariant.
  void validate() const;
};

// Shoulder and elbow angles with their first two time derivatives.
struct JointTrajectory {
  Eigen::Vector2d q = Eigen::Vector2d::Zero();  // (theta_s, theta_e)
  Eigen::Vector2d qd = Eigen::Vector2d::Zero();
  Eigen::Vector2d qdd = Eigen::Vector2d::Zero();
};

// Periodic wing gait as a truncated Fourier series in flapping phase, so it
// can be differentiated twice in closed form.
class GaitSchedule {
public:
  GaitSchedule() = default;

  // A wing held at fixed angles.
  static GaitSchedule fixed(double theta_s, double theta_e);
  // Least-squares fit to one cycle of uniformly or non-uniformly spaced samples.
  static GaitSchedule fit(std::span<const double> phase, std::span<const double> theta_s,
                          std::span<const double> theta_e, double frequency, int harmonics);
  static GaitSchedule from_targets(double frequency, int harmonics = 12, int samples = 720,
                                   kinematics::ElbowTargetForm form =
                                       kinematics::ElbowTargetForm::Normalized);
  // One crank revolution of the linkage per wingbeat.
  static GaitSchedule from_linkage(const kinematics::LinkageDesign& design, double frequency,
                                   int harmonics = 12, int samples = 720);

  JointTrajectory at(double t) const;
  double frequency() const { return frequency_; }
  int harmonics() const { return static_cast<int>(cos_.cols()); }

private:
  double frequency_ = 0.0;
  Eigen::Vector2d mean_ = Eigen::Vector2d::Zero();
  Eigen::Matrix<double, 2, Eigen::Dynamic> cos_, sin_;
};

// A point on one arm in the Aerobat frame with its velocity and acceleration
// relative to the body, and its Jacobian with respect to (theta_s, theta_e).
struct ArmPoint {
  Vector3d r = Vector3d::Zero();
  Vector3d rd = Vector3d::Zero();
  Vector3d rdd = Vector3d::Zero();
  Eigen::Matrix<double, 3, 2> jacobian = Eigen::Matrix<double, 3, 2>::Zero();
  Vector3d span = Vector3d::UnitY();    // unit direction of the link under the point
  Vector3d normal = Vector3d::UnitZ();  // plate normal, up for a level wing
};

// side = +1 for the left wing (+y), -1 for the right. The arm lies in the
// body y-z plane: the humerus at theta_s above the horizontal, the radius at
// theta_s + theta_e - pi. `arc` is measured from the shoulder along the arm.
ArmPoint arm_point(double arc, int side, const JointTrajectory& gait, const AerobatParams& p);

struct LumpedMass {
  double mass = 0.0;
  ArmPoint point;
};

// Body mass at the origin followed by proximal/distal masses, left then right.
std::vector<LumpedMass> lumped_masses(const JointTrajectory& gait, const AerobatParams& p);

// Partitioned Newton-Euler terms for nu = (body-frame acceleration of the
// origin, angular acceleration): D_u nu_dot = H_u + F_ext - D_ua qdd.
struct RomMatrices {
  Eigen::Matrix<double, 6, 6> d_u;
  Eigen::Matrix<double, 6, 2> d_ua;
  Eigen::Matrix<double, 6, 1> h_u;  // gravity, velocity-product and gait-rate terms
};

RomMatrices rom_matrices(const RigidBodyState& s, const JointTrajectory& gait,
                         const AerobatParams& p, double gravity);

// Motion of the Aerobat body under a body-frame wrench about its origin.
// Throws SingularInertia when D_u is numerically singular.
RigidBodyDerivative aerobat_derivatives(const RigidBodyState& s, const JointTrajectory& gait,
                                        const Vector3d& force_body, const Vector3d& moment_body,
                                        const AerobatParams& p, double gravity);

// Kinetic energy of all lumped masses plus body rotation, and gravitational
// potential of every mass.
double aerobat_kinetic_energy(const RigidBodyState& s, const JointTrajectory& gait,
                              const AerobatParams& p);
double aerobat_gravity_potential(const RigidBodyState& s, const JointTrajectory& gait,
                                 const AerobatParams& p, double gravity);
// World-frame linear momentum of all lumped masses.
Vector3d aerobat_momentum(const RigidBodyState& s, const JointTrajectory& gait,
                          const AerobatParams& p);

// Aerobat pose relative to the guard: position in the guard frame and
// Z-Y-X angles (roll, pitch, yaw) of the relative rotation.
struct RelativePose {
  Vector3d position = Vector3d::Zero();
  Vector3d angles = Vector3d::Zero();
};
RelativePose relative_pose(const RigidBodyState& guard, const RigidBodyState& aerobat);

}  // namespace aerobat::dynamics
