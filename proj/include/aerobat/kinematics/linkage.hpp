#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace aerobat::kinematics {

using Vec2 = Eigen::Vector2d;

// Planar armwing mechanism, body frame (u spanwise outward, v up).
//
//   L1 ground      L2 shoulder coupler   L3 elbow coupler   L4 radius
//   L5 humerus     L6 drive crank        L7 driven crank
//
//   J1  drive crank axis (L1-L6)         J6  elbow (L5-L4)
//   J2  shoulder crank pin (L6-L2)       J7  elbow crank pin (L7-L3)
//   J3  driven crank axis (L1-L7)        J8  gear mesh (L6-L7)
//   J4  shoulder lever pin (L2-L5)       J9  elbow lever pin (L3-L4)
//   J5  shoulder (L1-L5)                 J10 wingtip membrane attachment (L4)
//
// The shoulder four-bar is ground/drive crank/shoulder coupler/humerus lever.
// The elbow loop closes through the elbow coupler onto a lever that extends
// the radius backwards past the elbow, so the elbow angle depends on both
// cranks.
inline constexpr int kJointCount = 10;

struct CouplerLengths {
  double shoulder_coupler = 0.030;
  double shoulder_lever = 0.012;
  double elbow_coupler = 0.050;
  double elbow_lever = 0.012;
};

struct GroundPivots {
  Vec2 shoulder_joint{0.0, 0.0};
  Vec2 shoulder_crank{-0.0316, -0.0066};
  Vec2 elbow_crank{-0.0019, -0.0145};
};

struct LinkageDesign {
  double humerus_length = 0.050;
  double radius_length = 0.090;
  double crank_radius_shoulder = 0.0069;
  double crank_radius_elbow = 0.0085;
  CouplerLengths coupler_lengths;
  GroundPivots ground_pivot_positions;
  // Lever directions: shoulder lever relative to the humerus, elbow lever
  // relative to the backward extension of the radius.
  double shoulder_lever_angle = -1.5707963267948966;
  double elbow_lever_angle = 0.0;
  // Shoulder crank angle at zero phase; the elbow crank leads it by phase_offset.
  double crank_phase = -1.2217304763960306;
  double phase_offset = -0.2617993877991494;
  double gear_ratio = 75.0;
  // +1 is the open configuration of each loop.
  int shoulder_branch = 1;
  int elbow_branch = 1;
};

struct LinkageState {
  double crank_angle = 0.0;
  double theta_s = 0.0;
  double theta_e = 0.0;  // pi is a straight arm, > pi is hyperextension
  std::array<Vec2, kJointCount> joint_positions{};
  // Included angle between the two members meeting at each joint, [0, 2*pi).
  std::array<double, kJointCount> joint_bend_angles{};
};

// Which joints are flexure hinges (the rest are full-rotation bearings).
constexpr std::array<bool, kJointCount> kIsHinge = {false, false, false, true,  true,
                                                    true,  false, false, true,  true};

// Crank angle produced by a motor angle through the reduction gear.
double motor_to_crank(const LinkageDesign& design, double motor_angle);

// Throws AssemblyError if the loops cannot close. When `previous` is given
// the assembly branch nearest to it is used; otherwise the design's branch.
LinkageState forward_kinematics(const LinkageDesign& design, double crank_angle,
                                const LinkageState* previous = nullptr);

// n uniformly spaced crank angles over one revolution, branch tracked by continuity.
std::vector<LinkageState> sweep_cycle(const LinkageDesign& design, int n);

// Largest |distance - design length| over every rigid member in the state.
double max_link_length_error(const LinkageDesign& design, const LinkageState& state);

// Empty optional when the circles do not meet. branch selects the side of the
// center line (+1 left of c0->c1).
std::optional<Vec2> circle_intersection(const Vec2& c0, double r0, const Vec2& c1, double r1,
                                        int branch);

bool lengths_positive(const LinkageDesign& design);

}  // namespace aerobat::kinematics
