#pragma once

#include <vector>

#include <Eigen/Core>

#include "aerobat/aero/wagner.hpp"

namespace aerobat::aero {

struct Strip {
  double station = 0.0;  // spanwise location s_i [m]
  double chord = 0.0;    // [m]
  double width = 0.0;    // [m]
};

struct WingGeometry {
  double half_span = 0.15;
  std::vector<Strip> strips;

  int strip_count() const { return static_cast<int>(strips.size()); }

  // m equal-width strips centred in their cells, chord tapering linearly from
  // root_chord to tip_ratio * root_chord.
  static WingGeometry tapered(int m, double half_span = 0.15, double root_chord = 0.06,
                              double tip_ratio = 0.5);

  // Throws std::invalid_argument on a broken invariant.
  void validate() const;
};

// arccos(s / l). Throws DomainError when s is outside [0, l].
double strip_theta(double station, double half_span);

// sum_k a_k sin(k theta).
double circulation(const Eigen::VectorXd& fourier_a, double theta);

enum class LagRealization {
  // z_k' = -(eps_k/c) z_k + y': the exact realization of the convolution.
  Exact,
  // D = -2 eps/c, E = 2 - exp(eps tau / c), C = +psi eps / c.
  // Grows without bound; kept for comparison only.
  DoubledRate,
};

struct AeroParams {
  int fourier_terms = 8;
  WagnerCoeffs wagner;
  LagRealization lag = LagRealization::Exact;
  double air_density = 1.225;     // kg/m^3
  double reference_speed = 2.5;   // m/s, nondimensionalizes y1 and scales time
  double profile_drag = 0.02;

  // d tau / dt.
  double time_scale() const { return 2.0 * reference_speed; }
};

// Assembled per-strip matrices stacked over the wing. Immutable after construction.
class AeroModel {
public:
  // Throws SingularSystem when the stacked A is numerically singular.
  AeroModel(WingGeometry geometry, AeroParams params);

  const WingGeometry& geometry() const { return geometry_; }
  const AeroParams& params() const { return params_; }
  int strips() const { return geometry_.strip_count(); }
  int terms() const { return params_.fourier_terms; }

  const Eigen::MatrixXd& A() const { return a_; }
  const Eigen::MatrixXd& B() const { return b_; }
  // Lag-to-force rows: C(i, 2i + k) = weight of z_{k,i}.
  const Eigen::MatrixXd& C() const { return c_; }
  // Diagonal of the lag dynamics, length 2m.
  const Eigen::VectorXd& D() const { return d_; }
  const Eigen::MatrixXd& induced() const { return y_gamma_; }
  const Eigen::VectorXd& theta() const { return theta_; }
  double condition_number() const { return condition_; }

  // Lag input gain E_i at scaled time tau (all ones for the exact realization).
  double lag_input(int k, int strip, double tau) const;

  // Solves A x = rhs (least squares when m > n).
  Eigen::VectorXd solve_a(const Eigen::VectorXd& rhs) const;

private:
  WingGeometry geometry_;
  AeroParams params_;
  Eigen::MatrixXd a_, b_, c_, y_gamma_, a_pinv_;
  Eigen::VectorXd d_, theta_;
  double condition_ = 0.0;
};

struct AeroState {
  Eigen::VectorXd fourier_a;  // n
  Eigen::VectorXd lag;        // 2m, ordered z_{1,1}, z_{2,1}, z_{1,2}, ...
  double time = 0.0;

  static AeroState zero(const AeroModel& model);
  // xi = [a; Z].
  Eigen::VectorXd unified() const;
  bool finite() const;
};

// Circulation-induced kinematics Y_gamma * a.
Eigen::VectorXd induced_kinematics(const Eigen::VectorXd& fourier_a, const AeroModel& model);

// y' = y1 + Y_gamma a.
Eigen::VectorXd effective_kinematics(const AeroState& state, const AeroModel& model,
                                     const Eigen::VectorXd& y1);

// Force coefficient response beta_i = Phi0 y'_i + C_i Z_i.
Eigen::VectorXd beta(const AeroState& state, const AeroModel& model, const Eigen::VectorXd& y1);

struct AeroDerivative {
  Eigen::VectorXd fourier_a;
  Eigen::VectorXd lag;
};

// Time derivative in seconds.
AeroDerivative aero_derivative(const AeroState& state, const AeroModel& model,
                               const Eigen::VectorXd& y1);

// One RK4 step with y1 interpolated linearly from y1_begin to y1_end.
// Throws std::invalid_argument for dt <= 0.
AeroState aero_step(const AeroState& state, const AeroModel& model,
                    const Eigen::VectorXd& y1_begin, const Eigen::VectorXd& y1_end, double dt);
// Zero-order hold on y1.
AeroState aero_step(const AeroState& state, const AeroModel& model, const Eigen::VectorXd& y1,
                    double dt);

// Per-strip kinematic input split by source; y1 = body + flapping.
struct StripForcing {
  Eigen::VectorXd y1;
  Eigen::VectorXd from_body;
  Eigen::VectorXd from_flapping;
};

// Relative air velocity at a strip and its orientation, body frame.
struct StripFlow {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();   // moment arm about the body origin
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();   // air relative to the strip [m/s]
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();    // unit plate normal
};

// Chord-normal relative airspeed over reference speed, split into the part
// due to body motion and the part due to flapping.
StripForcing strip_forcing(const std::vector<StripFlow>& body_part,
                           const std::vector<StripFlow>& flapping_part, double reference_speed);

struct AeroOutput {
  Eigen::VectorXd beta;
  std::vector<Eigen::Vector3d> strip_forces;
  Eigen::Vector3d force = Eigen::Vector3d::Zero();
  Eigen::Vector3d moment = Eigen::Vector3d::Zero();
};

// Normal force 0.5 rho |U|^2 c w beta along the plate normal plus profile
// drag along the relative flow; wrench about the body origin.
AeroOutput aero_output(const AeroState& state, const AeroModel& model, const Eigen::VectorXd& y1,
                       const std::vector<StripFlow>& flows);

}  // namespace aerobat::aero
