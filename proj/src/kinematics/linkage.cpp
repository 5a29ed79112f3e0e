#include "aerobat/kinematics/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aerobat/angles.hpp"
#include "aerobat/errors.hpp"

namespace aerobat::kinematics {

namespace {

Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

double heading(const Vec2& v) { return std::atan2(v.y(), v.x()); }

// Counter-clockwise angle from ray a to ray b, in [0, 2*pi).
double included_angle(const Vec2& a, const Vec2& b) {
  return wrap_2pi(heading(b) - heading(a));
}

[[noreturn]] void fail(const char* loop, double crank_angle) {
  std::ostringstream os;
  os << loop << " loop cannot close at crank angle " << rad2deg(crank_angle) << " deg";
  throw AssemblyError(os.str());
}

Vec2 pick(const Vec2& c0, double r0, const Vec2& c1, double r1, int branch,
          const Vec2* previous, const char* loop, double crank_angle) {
  if (previous == nullptr) {
    auto p = circle_intersection(c0, r0, c1, r1, branch);
    if (!p) fail(loop, crank_angle);
    return *p;
  }
  auto a = circle_intersection(c0, r0, c1, r1, 1);
  auto b = circle_intersection(c0, r0, c1, r1, -1);
  if (!a || !b) fail(loop, crank_angle);
  return (*a - *previous).squaredNorm() <= (*b - *previous).squaredNorm() ? *a : *b;
}

}  // namespace

std::optional<Vec2> circle_intersection(const Vec2& c0, double r0, const Vec2& c1, double r1,
                                        int branch) {
  const Vec2 d = c1 - c0;
  const double dist = d.norm();
  if (dist <= 0.0) return std::nullopt;
  const double a = (r0 * r0 - r1 * r1 + dist * dist) / (2.0 * dist);
  double h2 = r0 * r0 - a * a;
  // Tangency within round-off is still an assembly.
  if (h2 < 0.0) {
    if (h2 < -1e-14 * std::max(r0 * r0, 1e-12)) return std::nullopt;
    h2 = 0.0;
  }
  const Vec2 e = d / dist;
  const Vec2 perp{-e.y(), e.x()};
  return c0 + a * e + (branch >= 0 ? 1.0 : -1.0) * std::sqrt(h2) * perp;
}

double motor_to_crank(const LinkageDesign& design, double motor_angle) {
  return motor_angle / design.gear_ratio;
}

bool lengths_positive(const LinkageDesign& d) {
  const auto& c = d.coupler_lengths;
  return d.humerus_length > 0 && d.radius_length > 0 && d.crank_radius_shoulder >= 0 &&
         d.crank_radius_elbow >= 0 && c.shoulder_coupler > 0 && c.shoulder_lever > 0 &&
         c.elbow_coupler > 0 && c.elbow_lever > 0 && d.gear_ratio > 0;
}

LinkageState forward_kinematics(const LinkageDesign& d, double crank_angle,
                                const LinkageState* previous) {
  const auto& g = d.ground_pivot_positions;
  const auto& c = d.coupler_lengths;

  LinkageState s;
  s.crank_angle = crank_angle;
  auto& j = s.joint_positions;

  const double shoulder_crank = crank_angle + d.crank_phase;
  const double elbow_crank = shoulder_crank + d.phase_offset;

  j[0] = g.shoulder_crank;
  j[1] = g.shoulder_crank + d.crank_radius_shoulder * unit(shoulder_crank);
  j[2] = g.elbow_crank;
  j[4] = g.shoulder_joint;
  j[6] = g.elbow_crank + d.crank_radius_elbow * unit(elbow_crank);
  j[7] = 0.5 * (g.shoulder_crank + g.elbow_crank);

  j[3] = pick(g.shoulder_joint, c.shoulder_lever, j[1], c.shoulder_coupler, d.shoulder_branch,
              previous ? &previous->joint_positions[3] : nullptr, "shoulder", crank_angle);
  const double humerus = heading(j[3] - j[4]) - d.shoulder_lever_angle;
  j[5] = j[4] + d.humerus_length * unit(humerus);

  j[8] = pick(j[6], c.elbow_coupler, j[5], c.elbow_lever, d.elbow_branch,
              previous ? &previous->joint_positions[8] : nullptr, "elbow", crank_angle);
  const double radius = heading(j[5] - j[8]) + d.elbow_lever_angle;
  j[9] = j[5] + d.radius_length * unit(radius);

  s.theta_s = wrap_pi(humerus);
  s.theta_e = wrap_2pi(kPi + radius - humerus);

  auto& b = s.joint_bend_angles;
  const Vec2 ground_axis = g.elbow_crank - g.shoulder_crank;
  b[0] = included_angle(ground_axis, j[1] - j[0]);
  b[1] = included_angle(j[0] - j[1], j[3] - j[1]);
  b[2] = included_angle(-ground_axis, j[6] - j[2]);
  b[3] = included_angle(j[1] - j[3], j[4] - j[3]);
  // Shoulder measured against the body's lateral axis: straight when level.
  b[4] = wrap_2pi(kPi + s.theta_s);
  b[5] = s.theta_e;
  b[6] = included_angle(j[2] - j[6], j[8] - j[6]);
  b[7] = wrap_2pi(b[0] - b[2]);
  b[8] = included_angle(j[6] - j[8], j[5] - j[8]);
  b[9] = included_angle(j[5] - j[9], j[4] - j[9]);
  return s;
}

std::vector<LinkageState> sweep_cycle(const LinkageDesign& design, int n) {
  std::vector<LinkageState> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double phi = kTwoPi * k / n;
    out.push_back(forward_kinematics(design, phi, out.empty() ? nullptr : &out.back()));
  }
  return out;
}

double max_link_length_error(const LinkageDesign& d, const LinkageState& s) {
  const auto& j = s.joint_positions;
  const auto& c = d.coupler_lengths;
  const double lever_to_elbow = std::sqrt(
      d.humerus_length * d.humerus_length + c.shoulder_lever * c.shoulder_lever -
      2.0 * d.humerus_length * c.shoulder_lever * std::cos(d.shoulder_lever_angle));
  const double lever_to_tip = std::sqrt(
      d.radius_length * d.radius_length + c.elbow_lever * c.elbow_lever -
      2.0 * d.radius_length * c.elbow_lever * std::cos(kPi - d.elbow_lever_angle));
  const std::array<std::pair<std::pair<int, int>, double>, 10> members = {{
      {{0, 1}, d.crank_radius_shoulder},
      {{1, 3}, c.shoulder_coupler},
      {{4, 3}, c.shoulder_lever},
      {{4, 5}, d.humerus_length},
      {{3, 5}, lever_to_elbow},
      {{2, 6}, d.crank_radius_elbow},
      {{6, 8}, c.elbow_coupler},
      {{5, 8}, c.elbow_lever},
      {{5, 9}, d.radius_length},
      {{8, 9}, lever_to_tip},
  }};
  double worst = 0.0;
  for (const auto& [ends, length] : members) {
    const double dist = (j[ends.first] - j[ends.second]).norm();
    worst = std::max(worst, std::abs(dist - length));
  }
  return worst;
}

}  // namespace aerobat::kinematics
