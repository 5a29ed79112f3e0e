#pragma once

#include <cmath>
#include <numbers>

namespace aerobat {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Wraps into [0, 2*pi).
inline double wrap_2pi(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

// Wraps into (-pi, pi].
inline double wrap_pi(double a) {
  double w = wrap_2pi(a + kPi) - kPi;
  return w == -kPi ? kPi : w;
}

}  // namespace aerobat
