#pragma once

namespace aerobat::sim {

// One classical Runge-Kutta step for any state type supporting
// `State + State` and `double * State`. `f(t, x)` returns dx/dt.
template <typename State, typename Deriv>
State rk4_step(const Deriv& f, double t, const State& x, double dt) {
  const State k1 = f(t, x);
  const State k2 = f(t + 0.5 * dt, x + (0.5 * dt) * k1);
  const State k3 = f(t + 0.5 * dt, x + (0.5 * dt) * k2);
  const State k4 = f(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace aerobat::sim
