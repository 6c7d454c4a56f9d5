#pragma once

// Interval diffeomorphism families f_x : [0,1] -> [0,1] used as fiber maps of
// the skew product, together with the projective toolkit (Schwarzian
// derivative, cross-ratio, Poincare coordinate) that classifies them.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "skewlab/angle.hpp"
#include "skewlab/error.hpp"

namespace skewlab {

// Displacement p(x) of the fractional-linear family in the Poincare coordinate.
class DisplacementProfile {
 public:
  struct Cosine {
    double amplitude;
  };
  struct Step {
    std::vector<double> values;  // p = values[j] on [j/k, (j+1)/k)
  };

  static DisplacementProfile cosine(double amplitude) {
    require(std::isfinite(amplitude), "cosine amplitude must be finite");
    return DisplacementProfile(Cosine{amplitude});
  }

  static DisplacementProfile step(std::vector<double> values) {
    require(!values.empty(), "step profile needs at least one value");
    for (double v : values) require(std::isfinite(v), "step profile values must be finite");
    return DisplacementProfile(Step{std::move(values)});
  }

  bool is_step() const noexcept { return std::holds_alternative<Step>(variant_); }
  bool is_cosine() const noexcept { return std::holds_alternative<Cosine>(variant_); }
  const Step& as_step() const { return std::get<Step>(variant_); }
  const Cosine& as_cosine() const { return std::get<Cosine>(variant_); }

  // Number of step intervals; 0 for the cosine profile.
  int pieces() const noexcept {
    return is_step() ? static_cast<int>(std::get<Step>(variant_).values.size()) : 0;
  }

  double operator()(double x) const {
    if (const auto* c = std::get_if<Cosine>(&variant_)) return c->amplitude * cos_2pi(x);
    const auto& v = std::get<Step>(variant_).values;
    const auto k = static_cast<int>(v.size());
    int j = static_cast<int>(std::floor(wrap_angle(x) * k));
    if (j >= k) j = k - 1;
    return v[static_cast<std::size_t>(j)];
  }

  // Integral of p over the circle.
  double mean() const {
    if (is_cosine()) return 0.0;
    const auto& v = std::get<Step>(variant_).values;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  }

 private:
  explicit DisplacementProfile(std::variant<Cosine, Step> v) : variant_(std::move(v)) {}
  std::variant<Cosine, Step> variant_;
};

// g_c(y) = e^c y / (1 + (e^c - 1) y): translation by c in the Poincare coordinate.
struct MoebiusMap {
  double c = 0.0;
};

inline double moebius_eval(MoebiusMap m, double y) {
  if (!(y >= 0.0 && y <= 1.0)) throw DomainError("moebius_eval: y outside [0,1]");
  if (y == 0.0 || y == 1.0 || m.c == 0.0) return y;
  const double a = std::exp(m.c);
  return std::min(1.0, a * y / (1.0 + std::expm1(m.c) * y));
}

inline double moebius_derivative(MoebiusMap m, double y) {
  const double d = 1.0 + std::expm1(m.c) * y;
  return std::exp(m.c) / (d * d);
}

enum class FiberKind { KanQuadratic, InverseKan, FractionalLinear };

inline const char* to_string(FiberKind k) {
  switch (k) {
    case FiberKind::KanQuadratic: return "kan";
    case FiberKind::InverseKan: return "inverse-kan";
    case FiberKind::FractionalLinear: return "fractional-linear";
  }
  return "?";
}

// One-parameter family x -> f_x. Kan kinds use a = epsilon cos(2 pi x) in
// q_a(y) = y + a y (1 - y); the fractional-linear kind uses g_{p(x)}.
class FiberFamily {
 public:
  static FiberFamily kan(double epsilon) { return FiberFamily(FiberKind::KanQuadratic, epsilon); }
  static FiberFamily inverse_kan(double epsilon) { return FiberFamily(FiberKind::InverseKan, epsilon); }
  static FiberFamily fractional_linear(DisplacementProfile profile) {
    FiberFamily f(FiberKind::FractionalLinear, 0.0);
    f.profile_ = std::move(profile);
    return f;
  }

  FiberKind kind() const noexcept { return kind_; }
  double epsilon() const noexcept { return epsilon_; }
  const DisplacementProfile& profile() const { return profile_; }

  // Kan parameter a at angle x (Kan kinds only).
  double kan_parameter(double x) const noexcept { return epsilon_ * cos_2pi(x); }

  // Displacement c at angle x (fractional-linear kind only).
  double displacement(double x) const { return profile_(x); }

  std::string describe() const {
    std::string s = to_string(kind_);
    if (kind_ == FiberKind::FractionalLinear) {
      if (profile_.is_cosine()) {
        s += " cosine(" + std::to_string(profile_.as_cosine().amplitude) + ")";
      } else {
        s += " step(";
        const auto& v = profile_.as_step().values;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
        s += ")";
      }
    } else {
      s += " epsilon=" + std::to_string(epsilon_);
    }
    return s;
  }

 private:
  FiberFamily(FiberKind kind, double epsilon)
      : kind_(kind), epsilon_(epsilon), profile_(DisplacementProfile::cosine(0.0)) {
    if (kind != FiberKind::FractionalLinear) {
      require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
    }
  }

  FiberKind kind_;
  double epsilon_;
  DisplacementProfile profile_;
};

// Quadratic q_a and its inverse, |a| < 1.
namespace kan {

inline double eval(double a, double y) noexcept { return y + a * y * (1.0 - y); }

inline double derivative(double a, double y) noexcept { return (1.0 + a) - 2.0 * a * y; }

// Root of a u^2 - (1 + a) u + y = 0 in [0,1], written without the
// subtraction that cancels when a is small.
inline double invert(double a, double y) noexcept {
  if (y == 0.0 || y == 1.0 || a == 0.0) return y;
  const double b = 1.0 + a;
  return 2.0 * y / (b + std::sqrt(b * b - 4.0 * a * y));
}

inline double schwarzian(double a, double y) noexcept {
  if (a == 0.0) return 0.0;
  const double d = derivative(a, y);
  return -6.0 * a * a / (d * d);
}

}  // namespace kan

namespace detail {
inline void check_unit(double y, const char* op) {
  if (!(y >= 0.0 && y <= 1.0)) throw DomainError(std::string(op) + ": y outside [0,1]");
}
}  // namespace detail

inline double eval_fiber(const FiberFamily& f, double x, double y) {
  detail::check_unit(y, "eval_fiber");
  if (y == 0.0 || y == 1.0) return y;
  switch (f.kind()) {
    case FiberKind::KanQuadratic: return kan::eval(f.kan_parameter(x), y);
    case FiberKind::InverseKan: return kan::invert(f.kan_parameter(x), y);
    case FiberKind::FractionalLinear: return moebius_eval(MoebiusMap{f.displacement(x)}, y);
  }
  return y;
}

inline double fiber_derivative(const FiberFamily& f, double x, double y) {
  detail::check_unit(y, "fiber_derivative");
  switch (f.kind()) {
    case FiberKind::KanQuadratic: return kan::derivative(f.kan_parameter(x), y);
    case FiberKind::InverseKan: {
      const double a = f.kan_parameter(x);
      return 1.0 / kan::derivative(a, kan::invert(a, y));
    }
    case FiberKind::FractionalLinear: return moebius_derivative(MoebiusMap{f.displacement(x)}, y);
  }
  return 1.0;
}

inline double invert_fiber(const FiberFamily& f, double x, double y_image) {
  detail::check_unit(y_image, "invert_fiber");
  switch (f.kind()) {
    case FiberKind::KanQuadratic: return kan::invert(f.kan_parameter(x), y_image);
    case FiberKind::InverseKan: return y_image == 1.0 ? 1.0 : kan::eval(f.kan_parameter(x), y_image);
    case FiberKind::FractionalLinear: return moebius_eval(MoebiusMap{-f.displacement(x)}, y_image);
  }
  return y_image;
}

inline double schwarzian_analytic(const FiberFamily& f, double x, double y) {
  detail::check_unit(y, "schwarzian_analytic");
  switch (f.kind()) {
    case FiberKind::KanQuadratic: return kan::schwarzian(f.kan_parameter(x), y);
    case FiberKind::InverseKan: {
      // S(g^-1)(y) = -S(g)(u) / g'(u)^2 at u = g^-1(y).
      const double a = f.kan_parameter(x);
      if (a == 0.0) return 0.0;
      const double u = kan::invert(a, y);
      const double d = kan::derivative(a, u);
      return -kan::schwarzian(a, u) / (d * d);
    }
    case FiberKind::FractionalLinear: return 0.0;
  }
  return 0.0;
}

// Finite-difference Schwarzian f'''/f' - 3/2 (f''/f')^2 with five-point
// stencils. The stencil y - 2h .. y + 2h must stay inside [0,1].
template <typename Fn>
double schwarzian_numeric(Fn&& f, double y, double h = 1e-3) {
  require(h > 0.0, "schwarzian_numeric: step must be positive");
  if (y - 2.0 * h < 0.0 || y + 2.0 * h > 1.0) {
    throw DomainError("schwarzian_numeric: stencil leaves [0,1]");
  }
  const double fm2 = f(y - 2.0 * h), fm1 = f(y - h), f0 = f(y), fp1 = f(y + h), fp2 = f(y + 2.0 * h);
  const double d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
  const double d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
  const double d3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
  const double r = d2 / d1;
  return d3 / d1 - 1.5 * r * r;
}

inline double cross_ratio(double y0, double y1, double y2, double y3) {
  if (y0 == y1 || y0 == y2 || y0 == y3 || y1 == y2 || y1 == y3 || y2 == y3) {
    throw DegenerateError("cross_ratio: repeated point");
  }
  return (y2 - y0) * (y3 - y1) / ((y1 - y0) * (y3 - y2));
}

// t(y) = log rho(0, 1/2, y, 1) = log(y / (1 - y)).
inline double poincare_coord(double y) {
  if (!(y > 0.0 && y < 1.0)) throw DomainError("poincare_coord: y must lie in (0,1)");
  return std::log(y) - std::log1p(-y);
}

inline double poincare_coord_inv(double t) noexcept { return 1.0 / (1.0 + std::exp(-t)); }

inline double poincare_distance(double y1, double y2) {
  return std::fabs(poincare_coord(y2) - poincare_coord(y1));
}

}  // namespace skewlab
