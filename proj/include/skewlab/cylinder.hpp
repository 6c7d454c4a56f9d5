#pragma once

// The skew product F(x, y) = (k x mod 1, f_x(y)) on the cylinder
// (R/Z) x [0, 1], with the circles y = 0 and y = 1 invariant.

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "skewlab/angle.hpp"
#include "skewlab/error.hpp"
#include "skewlab/fiber.hpp"

namespace skewlab {

struct CylPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const CylPoint&, const CylPoint&) = default;
};

class CylinderSystem {
 public:
  CylinderSystem(int k, FiberFamily family) : k_(k), family_(std::move(family)) {
    require(k >= 2, "base multiplier k must be >= 2");
    if (family_.kind() == FiberKind::FractionalLinear && family_.profile().is_step()) {
      require(family_.profile().pieces() == k, "step profile must have exactly k values");
    }
  }

  int k() const noexcept { return k_; }
  const FiberFamily& family() const noexcept { return family_; }

  std::string describe() const { return "k=" + std::to_string(k_) + " " + family_.describe(); }

 private:
  int k_;
  FiberFamily family_;
};

enum class BasinClass : unsigned char { Basin0 = 0, Basin1 = 1, Undecided = 2 };

inline const char* to_string(BasinClass c) {
  switch (c) {
    case BasinClass::Basin0: return "basin0";
    case BasinClass::Basin1: return "basin1";
    case BasinClass::Undecided: return "undecided";
  }
  return "?";
}

inline CylPoint step(const CylinderSystem& sys, CylPoint p) {
  return {times_k_mod1(sys.k(), p.x), eval_fiber(sys.family(), p.x, p.y)};
}

inline std::vector<CylPoint> orbit(const CylinderSystem& sys, CylPoint p0, std::size_t n) {
  std::vector<CylPoint> out;
  out.reserve(n + 1);
  out.push_back(p0);
  for (std::size_t i = 0; i < n; ++i) out.push_back(step(sys, out.back()));
  return out;
}

// The k angles z with k z = x mod 1, in increasing order.
inline std::vector<double> preimage_angles(int k, double x) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k));
  const double xr = wrap_angle(x);
  for (int j = 0; j < k; ++j) out.push_back((xr + j) / k);
  return out;
}

inline bool is_periodic_angle(int k, double x, int period, double tol = 1e-9) {
  double z = wrap_angle(x);
  for (int i = 0; i < period; ++i) z = times_k_mod1(k, z);
  return circle_distance(z, x) <= tol;
}

// Backward orbit whose angles approach x_star; element 0 is p0, element i+1
// is the preimage of element i whose angle is closest to x_star.
inline std::vector<CylPoint> backward_orbit_toward(const CylinderSystem& sys, CylPoint p0, double x_star,
                                                   std::size_t n) {
  require(is_periodic_angle(sys.k(), x_star, 1), "backward_orbit_toward: x_star is not fixed under x -> kx");
  if (!(p0.y > 0.0 && p0.y < 1.0)) throw DomainError("backward_orbit_toward: y0 must lie in (0,1)");
  std::vector<CylPoint> out;
  out.reserve(n + 1);
  out.push_back(p0);
  for (std::size_t i = 0; i < n; ++i) {
    const CylPoint cur = out.back();
    double best = 0.0;
    double best_dist = 2.0;
    // Candidates arrive in increasing order, so strict < keeps the smaller one on ties.
    for (double z : preimage_angles(sys.k(), cur.x)) {
      const double d = circle_distance(z, x_star);
      if (d < best_dist) {
        best_dist = d;
        best = z;
      }
    }
    out.push_back({best, invert_fiber(sys.family(), best, cur.y)});
  }
  return out;
}

inline double canonical_fixed_angle(int k) {
  require(k >= 3, "canonical_fixed_angle: k must be >= 3");
  if (k % 2 == 1) return 0.5;
  return static_cast<double>(k) / (2.0 * k - 2.0);
}

struct HypothesisGrid {
  std::size_t angles = 41;
  std::size_t heights = 99;
};

struct HypothesisViolation {
  bool near_minus;  // true: x^- neighbourhood (needs f < y); false: x^+ (needs f > y)
  double x;
  double y;
  double image;
};

struct HypothesisReport {
  bool pass = true;
  std::size_t samples = 0;
  std::vector<HypothesisViolation> violations;
};

// Fiber map of F^period over the angle x.
inline double iterated_fiber(const CylinderSystem& sys, double x, double y, int period) {
  for (int i = 0; i < period; ++i) {
    y = eval_fiber(sys.family(), x, y);
    x = times_k_mod1(sys.k(), x);
  }
  return y;
}

// Grid check of the two-sided hypothesis: f^(period)_x(y) < y for x near
// x_minus and > y for x near x_plus, all interior y.
inline HypothesisReport check_kan_hypothesis(const CylinderSystem& sys, double x_minus, double x_plus,
                                             double radius, HypothesisGrid grid = {}, int period = 1) {
  require(radius > 0.0, "check_kan_hypothesis: radius must be positive");
  require(period >= 1, "check_kan_hypothesis: period must be >= 1");
  require(grid.angles >= 2 && grid.heights >= 1, "check_kan_hypothesis: grid too small");
  require(is_periodic_angle(sys.k(), x_minus, period), "check_kan_hypothesis: x_minus is not periodic");
  require(is_periodic_angle(sys.k(), x_plus, period), "check_kan_hypothesis: x_plus is not periodic");

  HypothesisReport report;
  for (int side = 0; side < 2; ++side) {
    const bool minus = side == 0;
    const double centre = minus ? x_minus : x_plus;
    for (std::size_t i = 0; i < grid.angles; ++i) {
      const double s = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(grid.angles - 1);
      const double x = wrap_angle(centre + radius * s);
      for (std::size_t j = 0; j < grid.heights; ++j) {
        const double y = static_cast<double>(j + 1) / static_cast<double>(grid.heights + 1);
        const double img = iterated_fiber(sys, x, y, period);
        ++report.samples;
        if (minus ? !(img < y) : !(img > y)) report.violations.push_back({minus, x, y, img});
      }
    }
  }
  report.pass = report.violations.empty();
  return report;
}

// First-hitting classification: Basin0 once y < delta, Basin1 once y > 1 - delta.
inline BasinClass classify_point(const CylinderSystem& sys, CylPoint p, std::size_t n_max, double delta) {
  require(delta > 0.0 && delta < 0.5, "classify_point: delta must lie in (0, 0.5)");
  const auto decide = [delta](double y) {
    if (y < delta) return BasinClass::Basin0;
    if (y > 1.0 - delta) return BasinClass::Basin1;
    return BasinClass::Undecided;
  };
  BasinClass c = decide(p.y);
  for (std::size_t i = 0; i < n_max && c == BasinClass::Undecided; ++i) {
    p = step(sys, p);
    c = decide(p.y);
  }
  return c;
}

struct SeparatorSample {
  double x = 0.0;
  double sigma = 0.0;
  double bracket = 1.0;
  bool decided = false;
};

// Bisection for the fiber height sigma(x) separating the two basins. The
// bracket [lo, hi] always has lo in Basin0 and hi in Basin1.
inline SeparatorSample estimate_separator(const CylinderSystem& sys, double x, std::size_t n_max, double delta,
                                          double tol) {
  require(sys.family().kind() == FiberKind::KanQuadratic,
          "estimate_separator: needs the negative-Schwarzian (Kan) family");
  require(tol > 0.0, "estimate_separator: tol must be positive");
  require(delta > 0.0 && delta < 0.5, "estimate_separator: delta must lie in (0, 0.5)");
  SeparatorSample s;
  s.x = wrap_angle(x);
  double lo = delta;
  double hi = 1.0 - delta;
  const BasinClass c_lo = classify_point(sys, {s.x, lo}, n_max, delta);
  const BasinClass c_hi = classify_point(sys, {s.x, hi}, n_max, delta);
  if (c_lo == BasinClass::Undecided || c_hi == BasinClass::Undecided) {
    s.sigma = 0.5;
    s.bracket = hi - lo;
    return s;
  }
  // Whole fiber above (below) the seed lies in one basin: sigma sits in the end gap.
  if (c_lo == BasinClass::Basin1) {
    lo = 0.0;
    hi = delta;
  } else if (c_hi == BasinClass::Basin0) {
    lo = 1.0 - delta;
    hi = 1.0;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const BasinClass c = classify_point(sys, {s.x, mid}, n_max, delta);
    if (c == BasinClass::Undecided) {
      s.sigma = mid;
      s.bracket = hi - lo;
      return s;
    }
    (c == BasinClass::Basin0 ? lo : hi) = mid;
  }
  s.sigma = 0.5 * (lo + hi);
  s.bracket = hi - lo;
  s.decided = true;
  return s;
}

}  // namespace skewlab
