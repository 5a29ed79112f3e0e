#pragma once

#include <array>
#include <span>
#include <vector>

namespace aerobat::aero {

// Which indicial function is used.
enum class WagnerForm {
  // Phi = 1 - sum psi_k exp(-eps_k tau / c): rises to 1.
  Classical,
  // Phi = sum psi_k exp(-eps_k tau / c): decays to 0.
  PaperLiteral,
};

// Two-term exponential indicial response. `tau` is scaled time in meters of
// travel (2 * U_ref * t), so the exponent eps * tau / c is the semichord
// reduced time.
struct WagnerCoeffs {
  std::array<double, 2> psi{0.165, 0.335};
  std::array<double, 2> eps{0.0455, 0.300};
  WagnerForm form = WagnerForm::Classical;

  double phi(double tau, double chord) const;
  // dPhi/dtau.
  double dphi(double tau, double chord) const;
  double phi0() const { return phi(0.0, 1.0); }
  double phi_inf() const { return form == WagnerForm::Classical ? 1.0 : 0.0; }
  // Decay rate of lag state k per unit scaled time.
  double rate(int k, double chord) const { return eps[static_cast<std::size_t>(k)] / chord; }
  // Weight of lag state k in the force coefficient, so that
  // beta = phi0 * y' + sum_k weight_k * z_k reproduces Duhamel's integral.
  double lag_weight(int k, double chord) const;
};

// Duhamel convolution of a uniformly sampled y' history with the indicial
// response: beta(t) = y'(t) Phi0 + int_0^t Phi'(t - s) y'(s) ds, trapezoidal.
// `time_scale` converts seconds to scaled time (2 * U_ref). O(N^2); this is a
// validation path, not used by the simulator.
std::vector<double> wagner_response_oracle(std::span<const double> y_prime, double dt,
                                           const WagnerCoeffs& wagner, double chord,
                                           double time_scale);

}  // namespace aerobat::aero
