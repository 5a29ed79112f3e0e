#include "aerobat/dynamics/aerobat_rom.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "aerobat/angles.hpp"
#include "aerobat/errors.hpp"

namespace aerobat::dynamics {

void AerobatParams::validate() const {
  if (!(body_mass > 0.0) || proximal_mass < 0.0 || distal_mass < 0.0)
    throw std::invalid_argument("Aerobat masses must be positive");
  if (!(humerus_length > 0.0) || !(radius_length > 0.0))
    throw std::invalid_argument("wing link lengths must be positive");
  if ((body_inertia.array() <= 0.0).any())
    throw std::invalid_argument("Aerobat body inertia must be positive definite");
  if (flapping_frequency < 0.0 || flapping_frequency > 8.0)
    throw std::invalid_argument("flapping frequency must lie in [0, 8] Hz");
}

GaitSchedule GaitSchedule::fixed(double theta_s, double theta_e) {
  GaitSchedule g;
  g.mean_ = {theta_s, theta_e};
  g.cos_.resize(2, 0);
  g.sin_.resize(2, 0);
  return g;
}

GaitSchedule GaitSchedule::fit(std::span<const double> phase, std::span<const double> theta_s,
                               std::span<const double> theta_e, double frequency, int harmonics) {
  const auto n = static_cast<Eigen::Index>(phase.size());
  if (theta_s.size() != phase.size() || theta_e.size() != phase.size())
    throw std::invalid_argument("gait samples differ in length");
  if (harmonics < 0 || n < 2 * harmonics + 1)
    throw std::invalid_argument("too few gait samples for the requested harmonics");

  Eigen::MatrixXd basis(n, 2 * harmonics + 1);
  Eigen::MatrixXd y(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double phi = phase[static_cast<std::size_t>(i)];
    basis(i, 0) = 1.0;
    for (int k = 1; k <= harmonics; ++k) {
      basis(i, 2 * k - 1) = std::cos(k * phi);
      basis(i, 2 * k) = std::sin(k * phi);
    }
    y(i, 0) = theta_s[static_cast<std::size_t>(i)];
    y(i, 1) = theta_e[static_cast<std::size_t>(i)];
  }
  const Eigen::MatrixXd c = basis.colPivHouseholderQr().solve(y);

  GaitSchedule g;
  g.frequency_ = frequency;
  g.mean_ = c.row(0).transpose();
  g.cos_.resize(2, harmonics);
  g.sin_.resize(2, harmonics);
  for (int k = 1; k <= harmonics; ++k) {
    g.cos_.col(k - 1) = c.row(2 * k - 1).transpose();
    g.sin_.col(k - 1) = c.row(2 * k).transpose();
  }
  return g;
}

GaitSchedule GaitSchedule::from_targets(double frequency, int harmonics, int samples,
                                        kinematics::ElbowTargetForm form) {
  const auto targets = kinematics::sample_target_gait(samples, form);
  std::vector<double> phase, ts, te;
  for (const auto& t : targets) {
    phase.push_back(t.phase);
    ts.push_back(t.theta_s_hat);
    te.push_back(t.theta_e_hat);
  }
  return fit(phase, ts, te, frequency, harmonics);
}

GaitSchedule GaitSchedule::from_linkage(const kinematics::LinkageDesign& design, double frequency,
                                        int harmonics, int samples) {
  const auto states = kinematics::sweep_cycle(design, samples);
  std::vector<double> phase, ts, te;
  for (const auto& s : states) {
    phase.push_back(s.crank_angle);
    // Unwrap by continuity so the series sees a smooth signal.
    const double prev_s = ts.empty() ? wrap_pi(s.theta_s) : ts.back();
    const double prev_e = te.empty() ? s.theta_e : te.back();
    ts.push_back(prev_s + wrap_pi(s.theta_s - prev_s));
    te.push_back(prev_e + wrap_pi(s.theta_e - prev_e));
  }
  return fit(phase, ts, te, frequency, harmonics);
}

JointTrajectory GaitSchedule::at(double t) const {
  JointTrajectory j;
  j.q = mean_;
  const double w = kTwoPi * frequency_;
  for (Eigen::Index k = 0; k < cos_.cols(); ++k) {
    const double kw = static_cast<double>(k + 1) * w;
    const double c = std::cos(kw * t), s = std::sin(kw * t);
    j.q += cos_.col(k) * c + sin_.col(k) * s;
    j.qd += kw * (sin_.col(k) * c - cos_.col(k) * s);
    j.qdd -= kw * kw * (cos_.col(k) * c + sin_.col(k) * s);
  }
  return j;
}

ArmPoint arm_point(double arc, int side, const JointTrajectory& gait, const AerobatParams& p) {
  const double sd = side >= 0 ? 1.0 : -1.0;
  auto dir = [sd](double a) { return Vector3d(0.0, sd * std::cos(a), std::sin(a)); };
  auto perp = [sd](double a) { return Vector3d(0.0, -sd * std::sin(a), std::cos(a)); };

  const double ts = gait.q[0];
  const double psi = gait.q[0] + gait.q[1] - kPi;
  const double tsd = gait.qd[0], psid = gait.qd[0] + gait.qd[1];
  const double tsdd = gait.qdd[0], psidd = gait.qdd[0] + gait.qdd[1];
  const double h = p.humerus_length;

  ArmPoint a;
  a.r = Vector3d(0.0, sd * p.shoulder_offset, 0.0);
  if (arc <= h) {
    a.r += arc * dir(ts);
    a.rd = arc * tsd * perp(ts);
    a.rdd = arc * (tsdd * perp(ts) - tsd * tsd * dir(ts));
    a.jacobian.col(0) = arc * perp(ts);
    a.span = dir(ts);
  } else {
    const double along = arc - h;
    a.r += h * dir(ts) + along * dir(psi);
    a.rd = h * tsd * perp(ts) + along * psid * perp(psi);
    a.rdd = h * (tsdd * perp(ts) - tsd * tsd * dir(ts)) +
            along * (psidd * perp(psi) - psid * psid * dir(psi));
    a.jacobian.col(0) = h * perp(ts) + along * perp(psi);
    a.jacobian.col(1) = along * perp(psi);
    a.span = dir(psi);
  }
  a.normal = sd > 0 ? Vector3d::UnitX().cross(a.span) : a.span.cross(Vector3d::UnitX());
  return a;
}

std::vector<LumpedMass> lumped_masses(const JointTrajectory& gait, const AerobatParams& p) {
  std::vector<LumpedMass> m;
  m.push_back({p.body_mass, ArmPoint{}});
  for (int side : {1, -1}) {
    m.push_back({p.proximal_mass, arm_point(0.5 * p.humerus_length, side, gait, p)});
    m.push_back({p.distal_mass, arm_point(p.humerus_length + 0.5 * p.radius_length, side, gait, p)});
  }
  return m;
}

RomMatrices rom_matrices(const RigidBodyState& s, const JointTrajectory& gait,
                         const AerobatParams& p, double gravity) {
  const Vector3d g_body = s.rotation().transpose() * Vector3d(0.0, 0.0, -gravity);
  const Vector3d& w = s.omega;
  const Matrix3d ib = p.body_inertia.asDiagonal();

  RomMatrices out;
  out.d_u.setZero();
  out.d_ua.setZero();
  out.h_u.setZero();
  out.d_u.bottomRightCorner<3, 3>() = ib;
  out.h_u.tail<3>() = -w.cross(ib * w);

  for (const auto& lm : lumped_masses(gait, p)) {
    const double m = lm.mass;
    const Vector3d& r = lm.point.r;
    const Matrix3d rx = skew(r);
    // Acceleration of the point not proportional to nu_dot or qdd.
    const Vector3d rate_terms = lm.point.rdd - lm.point.jacobian * gait.qdd;
    const Vector3d bias = w.cross(w.cross(r)) + 2.0 * w.cross(lm.point.rd) + rate_terms;

    out.d_u.topLeftCorner<3, 3>() += m * Matrix3d::Identity();
    out.d_u.topRightCorner<3, 3>() -= m * rx;
    out.d_u.bottomLeftCorner<3, 3>() += m * rx;
    out.d_u.bottomRightCorner<3, 3>() -= m * rx * rx;
    out.d_ua.topRows<3>() += m * lm.point.jacobian;
    out.d_ua.bottomRows<3>() += m * rx * lm.point.jacobian;
    out.h_u.head<3>() += m * (g_body - bias);
    out.h_u.tail<3>() += m * r.cross(g_body - bias);
  }
  return out;
}

RigidBodyDerivative aerobat_derivatives(const RigidBodyState& s, const JointTrajectory& gait,
                                        const Vector3d& force_body, const Vector3d& moment_body,
                                        const AerobatParams& p, double gravity) {
  const RomMatrices rom = rom_matrices(s, gait, p, gravity);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> eig(rom.d_u, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12)
    throw SingularInertia("Aerobat inertia matrix is singular or indefinite");

  Eigen::Matrix<double, 6, 1> rhs = rom.h_u - rom.d_ua * gait.qdd;
  rhs.head<3>() += force_body;
  rhs.tail<3>() += moment_body;
  const Eigen::Matrix<double, 6, 1> nu_dot = rom.d_u.llt().solve(rhs);

  RigidBodyDerivative d;
  d.velocity = s.velocity;
  d.acceleration = s.rotation() * nu_dot.head<3>();
  d.quaternion_rate = quaternion_rate(s.orientation, s.omega);
  d.omega_rate = nu_dot.tail<3>();
  return d;
}

double aerobat_kinetic_energy(const RigidBodyState& s, const JointTrajectory& gait,
                              const AerobatParams& p) {
  const Vector3d v_body = s.rotation().transpose() * s.velocity;
  double t = 0.5 * s.omega.dot(p.body_inertia.asDiagonal() * s.omega);
  for (const auto& lm : lumped_masses(gait, p))
    t += 0.5 * lm.mass * (v_body + s.omega.cross(lm.point.r) + lm.point.rd).squaredNorm();
  return t;
}

double aerobat_gravity_potential(const RigidBodyState& s, const JointTrajectory& gait,
                                 const AerobatParams& p, double gravity) {
  const Matrix3d r = s.rotation();
  double v = 0.0;
  for (const auto& lm : lumped_masses(gait, p))
    v += lm.mass * gravity * (s.position + r * lm.point.r).z();
  return v;
}

Vector3d aerobat_momentum(const RigidBodyState& s, const JointTrajectory& gait,
                          const AerobatParams& p) {
  const Matrix3d r = s.rotation();
  Vector3d m = Vector3d::Zero();
  for (const auto& lm : lumped_masses(gait, p))
    m += lm.mass * (s.velocity + r * (s.omega.cross(lm.point.r) + lm.point.rd));
  return m;
}

RelativePose relative_pose(const RigidBodyState& guard, const RigidBodyState& aerobat) {
  RelativePose rp;
  rp.position = guard.rotation().transpose() * (aerobat.position - guard.position);
  rp.angles = euler_zyx(guard.orientation.conjugate() * aerobat.orientation);
  return rp;
}

}  // namespace aerobat::dynamics
