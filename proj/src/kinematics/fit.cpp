#include "aerobat/kinematics/fit.hpp"

#include <stdexcept>

#include "aerobat/errors.hpp"

namespace aerobat::kinematics {

double r_squared(std::span<const double> actual, std::span<const double> target) {
  if (actual.size() != target.size() || target.size() < 2)
    throw std::invalid_argument("r_squared: sequences must have equal length >= 2");
  double mean = 0.0;
  for (double t : target) mean += t;
  mean /= static_cast<double>(target.size());
  double ss_tot = 0.0;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    ss_tot += (target[i] - mean) * (target[i] - mean);
    ss_res += (actual[i] - target[i]) * (actual[i] - target[i]);
  }
  if (ss_tot == 0.0) throw DegenerateTarget("r_squared: target has zero variance");
  return 1.0 - ss_res / ss_tot;
}

}  // namespace aerobat::kinematics
