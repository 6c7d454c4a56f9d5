#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "skewlab/angle.hpp"
#include "skewlab/error.hpp"

namespace skewlab {

inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for substream `index` of a run seeded with `seed`. Parallel workers
// use one substream per task so results never depend on scheduling.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t s = seed ^ (0xd1b54a32d192ed03ULL * (index + 1));
  splitmix64(s);
  return splitmix64(s);
}

// mt19937_64 with distribution code written out so that streams are identical
// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), unbiased by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

 private:
  std::mt19937_64 engine_;
};

// Orbit of x -> k x mod 1 carried as a window of base-k digits in an integer,
// x_i = 0.d_{i+1} d_{i+2} ... d_{i+D} (base k). The first D digits come from
// x0; every shift appends a fresh uniform digit. This is the exact digit
// shift for D steps, after which the orbit continues as that of a Lebesgue
// random refinement of x0 instead of collapsing the way the float map does.
// Angles fixed by the float map (0, 1/2 for odd k, ...) stay fixed.
class BaseOrbit {
 public:
  BaseOrbit(int k, double x0, std::uint64_t seed) : k_(k), rng_(seed) {
    init_radix();
    const double x = wrap_angle(x0);
    fixed_ = times_k_mod1(k, x) == x;
    fixed_angle_ = x;
    long double scaled = static_cast<long double>(x) * static_cast<long double>(radix_);
    window_ = static_cast<std::uint64_t>(scaled);
    if (window_ >= radix_) window_ = radix_ - 1;
  }

  // Orbit whose digits are all drawn from `rng`, in order: d_1, d_2, ...
  static BaseOrbit from_digits(int k, Rng rng) {
    BaseOrbit orbit(k, rng);
    orbit.window_ = 0;
    for (int i = 0; i < orbit.depth_; ++i) orbit.window_ = orbit.window_ * k + orbit.rng_.below(k);
    return orbit;
  }

  int k() const noexcept { return k_; }
  int depth() const noexcept { return depth_; }

  double angle() const noexcept {
    if (fixed_) return fixed_angle_;
    double x = static_cast<double>(static_cast<long double>(window_) / static_cast<long double>(radix_));
    return x < 1.0 ? x : std::nextafter(1.0, 0.0);
  }

  // Most significant digit d_{i+1}, i.e. floor(k x_i).
  int leading_digit() const noexcept {
    if (fixed_) return static_cast<int>(fixed_angle_ * k_);
    return static_cast<int>(window_ / (radix_ / static_cast<std::uint64_t>(k_)));
  }

  void advance() {
    if (fixed_) return;
    const std::uint64_t top = radix_ / static_cast<std::uint64_t>(k_);
    window_ = (window_ % top) * static_cast<std::uint64_t>(k_) + rng_.below(k_);
  }

 private:
  BaseOrbit(int k, Rng rng) : k_(k), rng_(rng) { init_radix(); }

  void init_radix() {
    require(k_ >= 2, "base multiplier k must be >= 2");
    radix_ = 1;
    depth_ = 0;
    const auto kk = static_cast<std::uint64_t>(k_);
    while (radix_ <= std::numeric_limits<std::uint64_t>::max() / kk) {
      radix_ *= kk;
      ++depth_;
    }
  }

  int k_;
  Rng rng_;
  std::uint64_t radix_ = 1;  // k^depth
  int depth_ = 0;
  std::uint64_t window_ = 0;
  bool fixed_ = false;
  double fixed_angle_ = 0.0;
};

}  // namespace skewlab
