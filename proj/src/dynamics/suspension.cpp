#include "aerobat/dynamics/suspension.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aerobat::dynamics {

SuspensionParams SuspensionParams::defaults(double upper_stretch, double lower_stretch) {
  SuspensionParams p;
  constexpr double kBodyHalf = 0.012;
  constexpr double kAnchorHalf = 0.05;
  constexpr double kAnchorHeight = 0.09;
  for (double sz : {1.0, -1.0})
    for (double sx : {1.0, -1.0})
      for (double sy : {1.0, -1.0}) {
        Band b;
        b.guard_point = {sx * kAnchorHalf, sy * kAnchorHalf, sz * kAnchorHeight};
        b.aerobat_point = {sx * kBodyHalf, sy * kBodyHalf, sz * kBodyHalf};
        const double length = (b.guard_point - b.aerobat_point).norm();
        b.rest_length = length - (sz > 0 ? upper_stretch : lower_stretch);
        p.bands.push_back(b);
      }
  return p;
}

void SuspensionParams::validate(double ax, double ay, double az) const {
  if (!(stiffness > 0.0)) throw std::invalid_argument("band stiffness must be positive");
  if (damping < 0.0) throw std::invalid_argument("band damping must be non-negative");
  if (bands.size() < 2) throw std::invalid_argument("at least two bands are required");
  for (const auto& b : bands) {
    const Vector3d& g = b.guard_point;
    const double e = (g.x() / ax) * (g.x() / ax) + (g.y() / ay) * (g.y() / ay) +
                     (g.z() / az) * (g.z() / az);
    if (e > 1.0) throw std::invalid_argument("band anchor lies outside the guard envelope");
    if (b.rest_length < 0.0) throw std::invalid_argument("band rest length must be non-negative");
  }
}

SuspensionWrench suspension_wrench(const RigidBodyState& guard, const RigidBodyState& aerobat,
                                   const SuspensionParams& params, double aerobat_mass,
                                   double gravity) {
  SuspensionWrench w;
  const Matrix3d rg = guard.rotation();
  const Matrix3d ra = aerobat.rotation();
  for (const auto& band : params.bands) {
    const Vector3d arm_g = rg * band.guard_point;
    const Vector3d arm_a = ra * band.aerobat_point;
    const Vector3d d = (aerobat.position + arm_a) - (guard.position + arm_g);
    const double length = d.norm();
    double tension = 0.0;
    if (length > band.rest_length && length > 0.0) {
      const Vector3d dir = d / length;
      tension = params.stiffness * (length - band.rest_length);
      if (params.damping > 0.0) {
        const Vector3d va = aerobat.velocity + ra * aerobat.omega.cross(band.aerobat_point);
        const Vector3d vg = guard.velocity + rg * guard.omega.cross(band.guard_point);
        tension += params.damping * dir.dot(va - vg);
        tension = std::max(tension, 0.0);
      }
      const Vector3d on_aerobat = -tension * dir;
      w.force_on_aerobat += on_aerobat;
      w.force_on_guard -= on_aerobat;
      w.moment_on_aerobat += band.aerobat_point.cross(ra.transpose() * on_aerobat);
      w.moment_on_guard += band.guard_point.cross(rg.transpose() * -on_aerobat);
    }
    w.tensions.push_back(tension);
  }
  w.gravity_on_aerobat = Vector3d(0.0, 0.0, -aerobat_mass * gravity);
  return w;
}

double suspension_potential(const RigidBodyState& guard, const RigidBodyState& aerobat,
                            const SuspensionParams& params, double aerobat_mass, double gravity) {
  double v = aerobat_mass * gravity * aerobat.position.z();
  const Matrix3d rg = guard.rotation();
  const Matrix3d ra = aerobat.rotation();
  for (const auto& band : params.bands) {
    const double length = ((aerobat.position + ra * band.aerobat_point) -
                           (guard.position + rg * band.guard_point)).norm();
    const double stretch = std::max(0.0, length - band.rest_length);
    v += 0.5 * params.stiffness * stretch * stretch;
  }
  return v;
}

}  // namespace aerobat::dynamics
