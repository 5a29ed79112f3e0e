#include "aerobat/aero/wagner.hpp"

#include <cmath>

namespace aerobat::aero {

double WagnerCoeffs::phi(double tau, double chord) const {
  double decaying = 0.0;
  for (int k = 0; k < 2; ++k) decaying += psi[k] * std::exp(-rate(k, chord) * tau);
  return form == WagnerForm::Classical ? 1.0 - decaying : decaying;
}

double WagnerCoeffs::dphi(double tau, double chord) const {
  double d = 0.0;
  for (int k = 0; k < 2; ++k) d += psi[k] * rate(k, chord) * std::exp(-rate(k, chord) * tau);
  return form == WagnerForm::Classical ? d : -d;
}

double WagnerCoeffs::lag_weight(int k, double chord) const {
  const double w = psi[static_cast<std::size_t>(k)] * rate(k, chord);
  return form == WagnerForm::Classical ? w : -w;
}

std::vector<double> wagner_response_oracle(std::span<const double> y_prime, double dt,
                                           const WagnerCoeffs& wagner, double chord,
                                           double time_scale) {
  const std::size_t n = y_prime.size();
  const double h = time_scale * dt;
  // Kernel tabulated once: Phi'(j h).
  std::vector<double> kernel(n);
  for (std::size_t j = 0; j < n; ++j) kernel[j] = wagner.dphi(static_cast<double>(j) * h, chord);

  std::vector<double> beta(n);
  const double phi0 = wagner.phi0();
  for (std::size_t i = 0; i < n; ++i) {
    double integral = 0.0;
    if (i > 0) {
      integral = 0.5 * (kernel[i] * y_prime[0] + kernel[0] * y_prime[i]);
      for (std::size_t j = 1; j < i; ++j) integral += kernel[i - j] * y_prime[j];
      integral *= h;
    }
    beta[i] = phi0 * y_prime[i] + integral;
  }
  return beta;
}

}  // namespace aerobat::aero
