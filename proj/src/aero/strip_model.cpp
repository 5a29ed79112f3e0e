#include "aerobat/aero/strip_model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "aerobat/errors.hpp"
#include "aerobat/sim/rk4.hpp"

namespace aerobat::aero {

WingGeometry WingGeometry::tapered(int m, double half_span, double root_chord, double tip_ratio) {
  WingGeometry g;
  g.half_span = half_span;
  const double width = half_span / m;
  for (int i = 0; i < m; ++i) {
    const double s = (i + 0.5) * width;
    g.strips.push_back({s, root_chord * (1.0 - (1.0 - tip_ratio) * s / half_span), width});
  }
  return g;
}

void WingGeometry::validate() const {
  if (!(half_span > 0.0)) throw std::invalid_argument("wing half span must be positive");
  if (strips.empty()) throw std::invalid_argument("wing needs at least one strip");
  double total_width = 0.0;
  double previous = 0.0;
  for (const auto& s : strips) {
    if (!(s.station > previous) || !(s.station < half_span))
      throw std::invalid_argument("strip stations must be strictly increasing inside (0, l)");
    if (!(s.chord > 0.0) || !(s.width > 0.0))
      throw std::invalid_argument("strip chord and width must be positive");
    previous = s.station;
    total_width += s.width;
  }
  if (total_width > half_span * (1.0 + 1e-12))
    throw std::invalid_argument("strip widths exceed the half span");
}

double strip_theta(double station, double half_span) {
  if (station < 0.0 || station > half_span) {
    std::ostringstream os;
    os << "strip station " << station << " outside [0, " << half_span << "]";
    throw DomainError(os.str());
  }
  return std::acos(station / half_span);
}

double circulation(const Eigen::VectorXd& a, double theta) {
  double gamma = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) gamma += a[k] * std::sin((k + 1) * theta);
  return gamma;
}

AeroModel::AeroModel(WingGeometry geometry, AeroParams params)
    : geometry_(std::move(geometry)), params_(params) {
  geometry_.validate();
  const int m = strips();
  const int n = terms();
  if (n < 1) throw std::invalid_argument("need at least one Fourier term");

  theta_.resize(m);
  a_.resize(m, n);
  y_gamma_.resize(m, n);
  b_.resize(m, n);
  c_ = Eigen::MatrixXd::Zero(m, 2 * m);
  d_.resize(2 * m);
  for (int i = 0; i < m; ++i) {
    const auto& strip = geometry_.strips[static_cast<std::size_t>(i)];
    theta_[i] = strip_theta(strip.station, geometry_.half_span);
    const double st = std::sin(theta_[i]);
    for (int k = 0; k < n; ++k) {
      a_(i, k) = std::sin((k + 1) * theta_[i]);
      y_gamma_(i, k) = a_(i, k) / st;
    }
    b_.row(i) = a_.row(i) / strip.chord;
    for (int k = 0; k < 2; ++k) {
      const double rate = params_.wagner.rate(k, strip.chord);
      if (params_.lag == LagRealization::Exact) {
        c_(i, 2 * i + k) = params_.wagner.lag_weight(k, strip.chord);
        d_[2 * i + k] = -rate;
      } else {
        c_(i, 2 * i + k) = params_.wagner.psi[static_cast<std::size_t>(k)] * rate;
        d_[2 * i + k] = -2.0 * rate;
      }
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  condition_ = (m < n || sv[sv.size() - 1] <= 0.0) ? INFINITY : sv[0] / sv[sv.size() - 1];
  if (!(condition_ <= 1e12)) {
    std::ostringstream os;
    os << "stacked A is singular (condition number " << condition_ << ")";
    throw SingularSystem(os.str());
  }
  a_pinv_ = svd.solve(Eigen::MatrixXd::Identity(m, m));
}

double AeroModel::lag_input(int k, int strip, double tau) const {
  if (params_.lag == LagRealization::Exact) return 1.0;
  const double chord = geometry_.strips[static_cast<std::size_t>(strip)].chord;
  return 2.0 - std::exp(params_.wagner.rate(k, chord) * tau);
}

Eigen::VectorXd AeroModel::solve_a(const Eigen::VectorXd& rhs) const { return a_pinv_ * rhs; }

AeroState AeroState::zero(const AeroModel& model) {
  return {Eigen::VectorXd::Zero(model.terms()), Eigen::VectorXd::Zero(2 * model.strips()), 0.0};
}

Eigen::VectorXd AeroState::unified() const {
  Eigen::VectorXd xi(fourier_a.size() + lag.size());
  xi << fourier_a, lag;
  return xi;
}

bool AeroState::finite() const {
  return fourier_a.allFinite() && lag.allFinite() && std::isfinite(time);
}

Eigen::VectorXd induced_kinematics(const Eigen::VectorXd& fourier_a, const AeroModel& model) {
  return model.induced() * fourier_a;
}

Eigen::VectorXd effective_kinematics(const AeroState& state, const AeroModel& model,
                                     const Eigen::VectorXd& y1) {
  return y1 + model.induced() * state.fourier_a;
}

Eigen::VectorXd beta(const AeroState& state, const AeroModel& model, const Eigen::VectorXd& y1) {
  return model.params().wagner.phi0() * effective_kinematics(state, model, y1) +
         model.C() * state.lag;
}

AeroDerivative aero_derivative(const AeroState& state, const AeroModel& model,
                               const Eigen::VectorXd& y1) {
  const double kappa = model.params().time_scale();
  const double tau = kappa * state.time;
  const Eigen::VectorXd y_eff = effective_kinematics(state, model, y1);
  const Eigen::VectorXd response =
      model.params().wagner.phi0() * y_eff + model.C() * state.lag;

  AeroDerivative d;
  d.fourier_a = kappa * model.solve_a(response - model.B() * state.fourier_a);
  d.lag.resize(state.lag.size());
  for (int i = 0; i < model.strips(); ++i)
    for (int k = 0; k < 2; ++k) {
      const int idx = 2 * i + k;
      d.lag[idx] = kappa * (model.D()[idx] * state.lag[idx] + model.lag_input(k, i, tau) * y_eff[i]);
    }
  return d;
}

AeroState aero_step(const AeroState& state, const AeroModel& model,
                    const Eigen::VectorXd& y1_begin, const Eigen::VectorXd& y1_end, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("aero_step: dt must be positive");
  const Eigen::Index n = state.fourier_a.size();
  const Eigen::Index lag = state.lag.size();
  const double t0 = state.time;

  auto f = [&](double t, const Eigen::VectorXd& x) {
    const double w = (t - t0) / dt;
    const Eigen::VectorXd y1 = (1.0 - w) * y1_begin + w * y1_end;
    AeroState s{x.head(n), x.tail(lag), t};
    const auto d = aero_derivative(s, model, y1);
    Eigen::VectorXd out(n + lag);
    out << d.fourier_a, d.lag;
    return out;
  };

  const Eigen::VectorXd next = sim::rk4_step(f, t0, state.unified(), dt);
  AeroState out{next.head(n), next.tail(lag), t0 + dt};
  if (!out.finite() || next.lpNorm<Eigen::Infinity>() > 1e8)
    throw NumericalBlowup("aerodynamic state diverged at t = " + std::to_string(out.time) + " s");
  return out;
}

AeroState aero_step(const AeroState& state, const AeroModel& model, const Eigen::VectorXd& y1,
                    double dt) {
  return aero_step(state, model, y1, y1, dt);
}

StripForcing strip_forcing(const std::vector<StripFlow>& body_part,
                           const std::vector<StripFlow>& flapping_part, double reference_speed) {
  const auto m = static_cast<Eigen::Index>(body_part.size());
  StripForcing f;
  f.from_body.resize(m);
  f.from_flapping.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& b = body_part[static_cast<std::size_t>(i)];
    const auto& w = flapping_part[static_cast<std::size_t>(i)];
    f.from_body[i] = b.velocity.dot(b.normal) / reference_speed;
    f.from_flapping[i] = w.velocity.dot(w.normal) / reference_speed;
  }
  f.y1 = f.from_body + f.from_flapping;
  return f;
}

AeroOutput aero_output(const AeroState& state, const AeroModel& model, const Eigen::VectorXd& y1,
                       const std::vector<StripFlow>& flows) {
  AeroOutput out;
  out.beta = beta(state, model, y1);
  const auto& p = model.params();
  out.strip_forces.reserve(flows.size());
  for (int i = 0; i < model.strips(); ++i) {
    const auto& strip = model.geometry().strips[static_cast<std::size_t>(i)];
    const auto& flow = flows[static_cast<std::size_t>(i)];
    const double dynamic = 0.5 * p.air_density * flow.velocity.squaredNorm() * strip.chord * strip.width;
    Eigen::Vector3d force = dynamic * out.beta[i] * flow.normal;
    const double speed = flow.velocity.norm();
    if (speed > 0.0) force += dynamic * p.profile_drag * flow.velocity / speed;
    out.strip_forces.push_back(force);
    out.force += force;
    out.moment += flow.position.cross(force);
  }
  return out;
}

}  // namespace aerobat::aero
