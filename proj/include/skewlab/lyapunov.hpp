#pragma once

// Transverse Lyapunov exponents of the invariant circles y = 0 and y = 1:
// Lyap(A_i) = integral over the circle of log f_x'(i) dx.

#include <cmath>
#include <cstdint>
#include <string>

#include "skewlab/cylinder.hpp"
#include "skewlab/error.hpp"
#include "skewlab/fiber.hpp"
#include "skewlab/random.hpp"

namespace skewlab {

enum class ExponentMethod { Quadrature, Birkhoff };

struct ExponentReport {
  double lyap0 = 0.0;
  double lyap1 = 0.0;
  ExponentMethod method = ExponentMethod::Quadrature;
  std::size_t resolution = 0;
  int sum_sign = 0;
};

// |sum| at or below this counts as zero: the fractional-linear exponents
// cancel only up to roundoff.
inline constexpr double kExponentSumZeroTol = 1e-12;

inline int sign_with_tolerance(double v, double tol = kExponentSumZeroTol) {
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

namespace detail {
inline double log_boundary_derivative(const FiberFamily& family, int boundary, double x) {
  const double d = fiber_derivative(family, x, boundary == 0 ? 0.0 : 1.0);
  if (!(d > 0.0)) throw DomainError("non-positive fiber derivative at boundary");
  return std::log(d);
}
}  // namespace detail

// Trapezoid rule on the periodic integrand (spectrally accurate for the
// cosine families); step profiles integrate exactly as their means.
inline double transverse_exponent_quadrature(const FiberFamily& family, int boundary, std::size_t nodes) {
  require(boundary == 0 || boundary == 1, "boundary must be 0 or 1");
  require(nodes >= 16, "quadrature needs at least 16 nodes");
  if (family.kind() == FiberKind::FractionalLinear && family.profile().is_step()) {
    // log g_c'(0) = c and log g_c'(1) = -c.
    const double m = family.profile().mean();
    return boundary == 0 ? m : -m;
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < nodes; ++j) {
    sum += detail::log_boundary_derivative(family, boundary, static_cast<double>(j) / static_cast<double>(nodes));
  }
  return sum / static_cast<double>(nodes);
}

// (1/n) sum_{i<n} log f'_{x_i}(boundary) along the base orbit of x0 (digit
// stream orbit, see BaseOrbit).
inline double transverse_exponent_birkhoff(const CylinderSystem& sys, int boundary, double x0, std::size_t n,
                                           std::uint64_t seed = 1) {
  require(boundary == 0 || boundary == 1, "boundary must be 0 or 1");
  require(n >= 1, "birkhoff average needs n >= 1");
  BaseOrbit base(sys.k(), x0, seed);
  // Neumaier summation; n reaches 1e6 and beyond.
  double sum = 0.0, carry = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = detail::log_boundary_derivative(sys.family(), boundary, base.angle());
    const double t = sum + v;
    carry += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
    base.advance();
  }
  return (sum + carry) / static_cast<double>(n);
}

inline ExponentReport exponent_report(const CylinderSystem& sys, std::size_t nodes) {
  ExponentReport r;
  r.method = ExponentMethod::Quadrature;
  r.resolution = nodes;
  r.lyap0 = transverse_exponent_quadrature(sys.family(), 0, nodes);
  r.lyap1 = transverse_exponent_quadrature(sys.family(), 1, nodes);
  r.sum_sign = sign_with_tolerance(r.lyap0 + r.lyap1);
  return r;
}

}  // namespace skewlab
