#include "aerobat/sim/integrator.hpp"

#include <sstream>
#include <stdexcept>
#include <string>

#include "aerobat/errors.hpp"
#include "aerobat/sim/rk4.hpp"

namespace aerobat::sim {

using dynamics::kRigidBodySize;

Integrator parse_integrator(std::string_view name) {
  if (name == "rk4") return Integrator::Rk4;
  if (name == "semi-implicit-euler") return Integrator::SemiImplicitEuler;
  throw std::invalid_argument("unknown integrator '" + std::string(name) +
                              "' (expected rk4 or semi-implicit-euler)");
}

std::string_view to_string(Integrator i) {
  return i == Integrator::Rk4 ? "rk4" : "semi-implicit-euler";
}

void check_finite(const Eigen::Ref<const Eigen::VectorXd>& x, double t, std::string_view what) {
  if (!x.allFinite() || x.lpNorm<Eigen::Infinity>() > kBlowupThreshold) {
    std::ostringstream os;
    os << what << " diverged at t = " << t << " s";
    throw NumericalBlowup(os.str());
  }
}

dynamics::CoupledState step_coupled(const dynamics::CoupledState& s,
                                    const dynamics::MotorForces& motors,
                                    const dynamics::CoupledModels& models, double dt,
                                    Integrator integrator) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_coupled: dt must be positive");
  auto f = [&](double t, const Eigen::VectorXd& x) {
    dynamics::CoupledState at = dynamics::unpack(x, s);
    at.time = t;
    return dynamics::coupled_derivatives(at, motors, models);
  };

  const Eigen::VectorXd x0 = dynamics::pack(s);
  Eigen::VectorXd x;
  if (integrator == Integrator::Rk4) {
    x = rk4_step(f, s.time, x0, dt);
  } else {
    // Velocities first, then positions and attitudes from the new velocities.
    const Eigen::VectorXd d = f(s.time, x0);
    x = x0 + dt * d;
    for (int body = 0; body < 2; ++body) {
      const int o = body * kRigidBodySize;
      x.segment<3>(o) = x0.segment<3>(o) + dt * x.segment<3>(o + 3);
      const Eigen::Vector4d q = x0.segment<4>(o + 6);
      const Eigen::Quaterniond quat(q[0], q[1], q[2], q[3]);
      x.segment<4>(o + 6) = q + dt * dynamics::quaternion_rate(quat, x.segment<3>(o + 10));
    }
  }

  dynamics::CoupledState next = dynamics::unpack(x, s);
  next.time = s.time + dt;
  next.aero_left.time = next.aero_right.time = next.time;
  next.guard.orientation.normalize();
  next.aerobat.orientation.normalize();
  check_finite(x, next.time, "coupled state");
  return next;
}

}  // namespace aerobat::sim
