#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "aerobat/kinematics/gait.hpp"
#include "aerobat/kinematics/linkage.hpp"

namespace aerobat::kinematics {

// Closed interval, radians.
struct AngleRange {
  double lo = 0.0;
  double hi = 0.0;
};

// The optimized subset of LinkageDesign, in this order. Humerus and radius
// lengths, gear ratio, shoulder joint position and branches stay fixed.
inline constexpr int kDesignParameterCount = 14;

Eigen::VectorXd design_to_vector(const LinkageDesign& design);
LinkageDesign vector_to_design(const Eigen::VectorXd& x, const LinkageDesign& fixed);

struct DesignBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  // Box around the default design, wide enough for the target gait.
  static DesignBounds defaults();
};

struct OptimizerOptions {
  int grid_points = 128;
  int starts = 16;
  int evaluations_per_start = 6000;
  double start_spread = 0.25;  // fraction of box width for the random starts
  std::uint64_t seed = 1;
  int jobs = 1;
  // Adds the hinge bend limits of bend_angle_check as penalties.
  bool penalize_bend = true;
};

enum class BendConvention {
  // Deviation from the hinge's mid-range angle (its as-built neutral).
  FromNeutral,
  // Deviation from the straight (180 deg) configuration.
  FromStraight,
};

struct BendReport {
  std::array<double, kJointCount> max_bend{};   // radians
  std::array<double, kJointCount> limit{};      // radians, +inf for bearings
  bool pass = true;
};

// Limits: J6, J9, J10 <= 90 deg; J4 <= 70 deg; other hinges <= 50 deg.
// Bearings (J1-J3, J7, J8) rotate freely and are reported but not limited.
BendReport bend_angle_check(const LinkageDesign& design, int samples = 360,
                            BendConvention convention = BendConvention::FromNeutral);

struct DesignEvaluation {
  double objective = 0.0;
  double r2_shoulder = 0.0;
  double r2_elbow = 0.0;
  AngleRange theta_s_range;
  AngleRange theta_e_range;
  std::vector<LinkageState> states;
};

// Throws AssemblyError if the design cannot close somewhere on the grid.
DesignEvaluation evaluate_design(const LinkageDesign& design,
                                 const std::vector<GaitTargets>& targets);

struct OptimizationReport {
  LinkageDesign optimized_design;
  double r2_shoulder = 0.0;
  double r2_elbow = 0.0;
  AngleRange theta_s_range;
  AngleRange theta_e_range;
  std::array<double, kJointCount> max_bend_angles{};
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
  int feasible_starts = 0;
  // Best objective after every simplex iteration of the winning start.
  std::vector<double> history;
};

// Minimizes the summed squared shoulder and elbow tracking error on the
// targets' phase grid subject to assembly at every grid point and no elbow
// hyperextension. Throws NoFeasibleStart when `init` (clamped into the box)
// fails anywhere on the grid.
OptimizationReport optimize_linkage(const LinkageDesign& init,
                                    const std::vector<GaitTargets>& targets,
                                    const DesignBounds& bounds, const OptimizerOptions& options = {});

// Penalized objective used by the optimizer, exposed for testing.
double linkage_objective(const LinkageDesign& design, const std::vector<GaitTargets>& targets,
                         bool penalize_bend);

}  // namespace aerobat::kinematics
