#include "aerobat/control/observer.hpp"

#include <stdexcept>

#include "aerobat/errors.hpp"
#include "aerobat/sim/rk4.hpp"

namespace aerobat::control {

namespace {

using Stacked = Eigen::Matrix<double, 18, 1>;

Stacked stack(const ObserverState& s) {
  Stacked x;
  x << s.x1, s.x2, s.x3;
  return x;
}

ObserverState split(const Stacked& x) { return {x.segment<6>(0), x.segment<6>(6), x.segment<6>(12)}; }

}  // namespace

ObserverGains place_observer_poles(const Poles& poles, const Vector6d& g3_diagonal) {
  for (const auto& p : poles)
    if (!(p.real() < 0.0))
      throw UnstablePoleRequest("observer poles must lie in the open left half-plane");
  // (s - p1)(s - p2)(s - p3) = s^3 + c2 s^2 + c1 s + c0
  const std::complex<double> c2 = -(poles[0] + poles[1] + poles[2]);
  const std::complex<double> c1 = poles[0] * poles[1] + poles[0] * poles[2] + poles[1] * poles[2];
  const std::complex<double> c0 = -(poles[0] * poles[1] * poles[2]);
  const double tol = 1e-9 * (1.0 + std::abs(c0) + std::abs(c1) + std::abs(c2));
  if (std::abs(c2.imag()) > tol || std::abs(c1.imag()) > tol || std::abs(c0.imag()) > tol)
    throw UnstablePoleRequest("complex observer poles must come in conjugate pairs");

  ObserverGains g;
  for (int i = 0; i < 6; ++i) {
    if (g3_diagonal[i] == 0.0) throw UnstablePoleRequest("disturbance gain g3 is zero on an axis");
    g.beta1(i, i) = c2.real();
    g.beta2(i, i) = c1.real();
    g.beta3(i, i) = c0.real() / g3_diagonal[i];
  }
  return g;
}

ObserverGains place_observer_poles(double triple_pole, const Vector6d& g3_diagonal) {
  return place_observer_poles(Poles{triple_pole, triple_pole, triple_pole}, g3_diagonal);
}

Eigen::Matrix3d error_matrix(const ObserverGains& gains, int axis, double g3) {
  Eigen::Matrix3d m;
  m << -gains.beta1(axis, axis), 1.0, 0.0,
       -gains.beta2(axis, axis), 0.0, g3,
       -gains.beta3(axis, axis), 0.0, 0.0;
  return m;
}

Eigen::MatrixXd error_matrix(const ObserverGains& gains, const Vector6d& g3_diagonal) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(18, 18);
  m.block<6, 6>(0, 0) = -gains.beta1;
  m.block<6, 6>(0, 6) = Matrix6d::Identity();
  m.block<6, 6>(6, 0) = -gains.beta2;
  m.block<6, 6>(6, 12) = g3_diagonal.asDiagonal();
  m.block<6, 6>(12, 0) = -gains.beta3;
  return m;
}

ObserverState observer_step(const ObserverState& obs, const std::function<Vector6d(double)>& measurement,
                            double t, const Vector6d& u, const ModelTerms& terms,
                            const ObserverGains& gains, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("observer_step: dt must be positive");
  const Vector6d drive = terms.g1 + terms.g2 * u;
  auto f = [&](double tau, const Stacked& x) {
    const Vector6d innovation = x.segment<6>(0) - measurement(tau);
    Stacked d;
    d << x.segment<6>(6) - gains.beta1 * innovation,
         drive + terms.g3 * x.segment<6>(12) - gains.beta2 * innovation,
         -gains.beta3 * innovation;
    return d;
  };
  return split(sim::rk4_step(f, t, stack(obs), dt));
}

ObserverState observer_step(const ObserverState& obs, const Vector6d& x1_begin,
                            const Vector6d& x1_end, const Vector6d& u, const ModelTerms& terms,
                            const ObserverGains& gains, double dt) {
  auto hold = [&](double tau) -> Vector6d { return x1_begin + (tau / dt) * (x1_end - x1_begin); };
  return observer_step(obs, hold, 0.0, u, terms, gains, dt);
}

}  // namespace aerobat::control
