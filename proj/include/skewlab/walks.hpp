#pragma once

// Zero-Schwarzian regime: for fractional-linear fibers the Poincare
// coordinate t = log(y / (1 - y)) moves by p(x) each step, so a step profile
// turns the fiber dynamics into a random walk driven by the base-k digits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "skewlab/cylinder.hpp"
#include "skewlab/error.hpp"
#include "skewlab/fiber.hpp"
#include "skewlab/io.hpp"
#include "skewlab/parallel.hpp"
#include "skewlab/random.hpp"

namespace skewlab {

struct WalkTrace {
  std::vector<double> t;  // t_0 .. t_n
  std::vector<double> steps_used;
  std::uint64_t seed = 0;

  std::size_t length() const noexcept { return t.empty() ? 0 : t.size() - 1; }
};

inline double average_displacement(const DisplacementProfile& profile) { return profile.mean(); }

// t_{i+1} = t_i + values[d_i] with d_i i.i.d. uniform digits in {0..k-1}.
inline WalkTrace simulate_walk(const DisplacementProfile& profile, double t0, std::size_t n, std::uint64_t seed) {
  require(profile.is_step(), "simulate_walk: needs a step profile");
  const auto& values = profile.as_step().values;
  const auto k = static_cast<std::uint64_t>(values.size());
  WalkTrace w;
  w.steps_used = values;
  w.seed = seed;
  w.t.resize(n + 1);
  w.t[0] = t0;
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) w.t[i + 1] = w.t[i] + values[rng.below(k)];
  return w;
}

// Counts over i = 1..n of t_i > N (a), |t_i| <= N (b), t_i < -N (c).
struct OccupationStats {
  double threshold = 0.0;
  std::vector<std::uint32_t> a, b, c;  // entry n-1 holds a_n, b_n, c_n

  std::size_t length() const noexcept { return a.size(); }
  double a_ratio(std::size_t n) const { return static_cast<double>(a.at(n - 1)) / static_cast<double>(n); }
  double b_ratio(std::size_t n) const { return static_cast<double>(b.at(n - 1)) / static_cast<double>(n); }
  double c_ratio(std::size_t n) const { return static_cast<double>(c.at(n - 1)) / static_cast<double>(n); }
};

enum class Side { Above, Within, Below };

inline Side occupation_side(double t, double threshold) noexcept {
  if (t > threshold) return Side::Above;
  if (t < -threshold) return Side::Below;
  return Side::Within;
}

inline OccupationStats occupation_ratios(const WalkTrace& trace, double threshold) {
  require(threshold >= 0.0, "occupation_ratios: threshold must be >= 0");
  OccupationStats s;
  s.threshold = threshold;
  const std::size_t n = trace.length();
  s.a.resize(n);
  s.b.resize(n);
  s.c.resize(n);
  std::uint32_t a = 0, b = 0, c = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    switch (occupation_side(trace.t[i], threshold)) {
      case Side::Above: ++a; break;
      case Side::Within: ++b; break;
      case Side::Below: ++c; break;
    }
    s.a[i - 1] = a;
    s.b[i - 1] = b;
    s.c[i - 1] = c;
  }
  return s;
}

struct RatioRange {
  double min = 0.0;
  double max = 0.0;
};

// Range of a_n / n over from <= n <= length. Small n is excluded by the
// caller: a_1 / 1 is always 0 or 1.
inline RatioRange a_ratio_range(const OccupationStats& s, std::size_t from) {
  require(from >= 1 && from <= s.length(), "a_ratio_range: from must lie in [1, length]");
  RatioRange r{1.0, 0.0};
  for (std::size_t n = from; n <= s.length(); ++n) {
    const double v = s.a_ratio(n);
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
  }
  return r;
}

// Rows n, a/n, b/n, c/n for n = every, 2*every, ... (and the final n).
inline void write_occupation_csv(std::ostream& out, const OccupationStats& s, std::size_t every = 1) {
  require(every >= 1, "write_occupation_csv: stride must be >= 1");
  out << "n,a_ratio,b_ratio,c_ratio\n";
  const std::size_t len = s.length();
  for (std::size_t n = every; n <= len; n += every) {
    out << n << ',' << format_double(s.a_ratio(n)) << ',' << format_double(s.b_ratio(n)) << ','
        << format_double(s.c_ratio(n)) << '\n';
  }
  if (len > 0 && len % every != 0) {
    out << len << ',' << format_double(s.a_ratio(len)) << ',' << format_double(s.b_ratio(len)) << ','
        << format_double(s.c_ratio(len)) << '\n';
  }
  check_stream(out, "occupation csv");
}

struct ArcsineRow {
  double eps = 0.0;
  double empirical = 0.0;
  double theoretical = 0.0;
};

inline double arcsine_limit(double eps) { return 2.0 / std::numbers::pi * std::asin(std::sqrt(eps)); }

// Fraction of walks (from t0 = 0, threshold N = 0) whose positive-time
// fraction a_n / n exceeds 1 - eps. Walk w uses seed derive_seed(seed, w).
inline std::vector<ArcsineRow> arcsine_ensemble(const DisplacementProfile& profile, std::size_t n,
                                                std::size_t num_walks, const std::vector<double>& eps_list,
                                                std::uint64_t seed, unsigned threads = default_threads()) {
  require(profile.is_step(), "arcsine_ensemble: needs a step profile");
  require(std::fabs(profile.mean()) <= 1e-12, "arcsine_ensemble: profile must have zero mean");
  require(n >= 1 && num_walks >= 1, "arcsine_ensemble: n and num_walks must be >= 1");
  for (double e : eps_list) require(e > 0.0 && e <= 1.0, "arcsine_ensemble: eps must lie in (0, 1]");

  std::vector<double> positive_fraction(num_walks);
  parallel_for(num_walks, threads, [&](std::size_t w) {
    const WalkTrace trace = simulate_walk(profile, 0.0, n, derive_seed(seed, w));
    std::size_t above = 0;
    for (std::size_t i = 1; i <= n; ++i) above += trace.t[i] > 0.0;
    positive_fraction[w] = static_cast<double>(above) / static_cast<double>(n);
  });

  std::vector<ArcsineRow> rows;
  for (double e : eps_list) {
    std::size_t hits = 0;
    for (double f : positive_fraction) hits += f > 1.0 - e;
    rows.push_back({e, static_cast<double>(hits) / static_cast<double>(num_walks), arcsine_limit(e)});
  }
  return rows;
}

inline void write_arcsine_csv(std::ostream& out, const std::vector<ArcsineRow>& rows) {
  out << "eps,empirical,theoretical\n";
  for (const auto& r : rows) {
    out << format_double(r.eps) << ',' << format_double(r.empirical) << ',' << format_double(r.theoretical) << '\n';
  }
  check_stream(out, "arcsine csv");
}

struct CircleWalkReport {
  double modulus = 0.0;
  std::size_t bins = 0;
  double cdf_deviation = 0.0;
};

// Reduces tau_i = t_i / L mod 1 (i = 0..n) and compares the empirical CDF to
// the uniform one at the bin edges j / bins.
inline CircleWalkReport circle_equidistribution(const WalkTrace& trace, double modulus, std::size_t bins) {
  require(!trace.t.empty(), "circle_equidistribution: empty trace");
  require(modulus > 0.0, "circle_equidistribution: modulus must be positive");
  require(bins >= 2, "circle_equidistribution: bins must be >= 2");
  std::vector<std::uint64_t> hist(bins, 0);
  for (double t : trace.t) {
    const double tau = wrap_angle(t / modulus);
    ++hist[std::min(bins - 1, static_cast<std::size_t>(tau * static_cast<double>(bins)))];
  }
  const auto total = static_cast<double>(trace.t.size());
  CircleWalkReport r{modulus, bins, 0.0};
  std::uint64_t below = 0;
  for (std::size_t j = 1; j < bins; ++j) {
    below += hist[j - 1];
    const double edge = static_cast<double>(j) / static_cast<double>(bins);
    r.cdf_deviation = std::max(r.cdf_deviation, std::fabs(static_cast<double>(below) / total - edge));
  }
  return r;
}

// Exact rational with positive denominator in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t n, std::int64_t d) {
    if (d == 0) throw DomainError("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const std::int64_t g = std::gcd(n, d);
    return g > 1 ? Rational{n / g, d / g} : Rational{n, d};
  }

  // Accepts "p", "p/q" and finite decimals such as "-0.25".
  static Rational parse(const std::string& s) {
    if (s.empty()) throw PreconditionError("empty rational");
    if (const auto slash = s.find('/'); slash != std::string::npos) {
      return make(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
    }
    const auto dot = s.find('.');
    if (dot == std::string::npos) return make(parse_int(s), 1);
    const std::string frac = s.substr(dot + 1);
    require(frac.size() <= 15, "rational: too many decimal digits");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::string whole = s.substr(0, dot);
    const bool negative = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    const std::int64_t w = parse_int(whole);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
    require(frac.empty() || frac[0] != '-', "rational: malformed decimal");
    const std::int64_t mag = (w < 0 ? -w : w) * scale + f;
    return make(negative ? -mag : mag, scale);
  }

  bool is_zero() const noexcept { return num == 0; }

  friend Rational operator/(Rational a, Rational b) {
    if (b.num == 0) throw DomainError("division by zero rational");
    return make(a.num * b.den, a.den * b.num);
  }

 private:
  static std::int64_t parse_int(const std::string& s) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw PreconditionError("malformed rational '" + s + "'");
    }
    if (pos != s.size()) throw PreconditionError("malformed rational '" + s + "'");
    return v;
  }
};

// Modulus L of the circle R / L Z: exact rational, or declared irrational
// (irrationality is a declaration, never inferred from a float).
struct Modulus {
  std::optional<Rational> exact;
  double approx = 0.0;

  static Modulus rational(Rational r) { return {r, static_cast<double>(r.num) / static_cast<double>(r.den)}; }
  static Modulus irrational(double approx) { return {std::nullopt, approx}; }
  bool is_irrational() const noexcept { return !exact.has_value(); }
};

// True iff every tau-increment value / L lies in one finite cyclic subgroup
// of R/Z. Rational increments always do (generated by 1 / lcm of the reduced
// denominators); with an irrational modulus only zero increments do.
inline bool cyclic_support_check(const std::vector<Rational>& values, const Modulus& modulus) {
  if (modulus.is_irrational()) {
    if (modulus.approx == 0.0) throw DomainError("cyclic_support_check: zero modulus");
    for (const auto& v : values) {
      if (!v.is_zero()) return false;
    }
    return true;
  }
  if (modulus.exact->is_zero()) throw DomainError("cyclic_support_check: zero modulus");
  return true;
}

// Order of the cyclic subgroup generated by the reduced increments (rational
// modulus only).
inline std::int64_t cyclic_subgroup_order(const std::vector<Rational>& values, const Modulus& modulus) {
  require(!modulus.is_irrational(), "cyclic_subgroup_order: modulus must be rational");
  if (modulus.exact->is_zero()) throw DomainError("cyclic_subgroup_order: zero modulus");
  std::int64_t order = 1;
  for (const auto& v : values) order = std::lcm(order, (v / *modulus.exact).den);
  return order;
}

// Orbit of the fractional-linear cylinder map from (x_0, y0) with the angle
// orbit taken from the digit stream of `seed` (the same digits simulate_walk
// draws), recording t(y_i). The fiber point is carried as the pair
// (y, 1 - y) so that t stays accurate when y is within rounding of 1.
inline WalkTrace fl_orbit_as_walk(const CylinderSystem& sys, double y0, std::size_t n, std::uint64_t seed) {
  const auto& family = sys.family();
  require(family.kind() == FiberKind::FractionalLinear && family.profile().is_step(),
          "fl_orbit_as_walk: needs a fractional-linear step family");
  if (!(y0 > 0.0 && y0 < 1.0)) throw DomainError("fl_orbit_as_walk: y0 must lie in (0,1)");
  WalkTrace w;
  w.steps_used = family.profile().as_step().values;
  w.seed = seed;
  w.t.reserve(n + 1);
  double y = y0;
  double ybar = 1.0 - y0;
  BaseOrbit base = BaseOrbit::from_digits(sys.k(), Rng(seed));
  w.t.push_back(std::log(y) - std::log(ybar));
  for (std::size_t i = 0; i < n; ++i) {
    const double growth = std::exp(family.displacement(base.angle()));
    const double denom = ybar + growth * y;
    y = growth * y / denom;
    ybar = ybar / denom;
    w.t.push_back(std::log(y) - std::log(ybar));
    base.advance();
  }
  return w;
}

}  // namespace skewlab
