#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace skewlab {

// Representative of x mod 1 in [0, 1).
inline double wrap_angle(double x) noexcept {
  double r = x - std::floor(x);
  // x slightly below an integer can round up to exactly 1.
  return r >= 1.0 ? 0.0 : r;
}

inline double circle_distance(double a, double b) noexcept {
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, 1.0 - d);
}

// cos(2 pi x) with exact values at multiples of 1/4: the argument is
// folded into [0, 1/8] before calling into libm, so cos_2pi(0.25) == 0.
inline double cos_2pi(double x) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = wrap_angle(x);
  if (r > 0.5) r = 1.0 - r;
  double sign = 1.0;
  if (r > 0.25) {
    r = 0.5 - r;
    sign = -1.0;
  }
  if (r > 0.125) return sign * std::sin(two_pi * (0.25 - r));
  return sign * std::cos(two_pi * r);
}

// One application of x -> k x mod 1 in floating point.
inline double times_k_mod1(int k, double x) noexcept {
  return wrap_angle(static_cast<double>(k) * x);
}

}  // namespace skewlab
