#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace aerobat::kinematics {

struct SimplexOptions {
  int max_evaluations = 4000;
  double initial_step = 0.1;  // relative to each coordinate's box width
  double f_tolerance = 1e-12;
  double x_tolerance = 1e-10;
  int restarts = 2;  // re-seed the simplex around the incumbent after convergence
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
  // Best value after each iteration; non-increasing.
  std::vector<double> history;
};

// Nelder-Mead on the unit box [0,1]^n. Trial points are clamped into the box.
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& start, const SimplexOptions& options = {});

}  // namespace aerobat::kinematics
