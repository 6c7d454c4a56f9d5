#pragma once

// Empirical asymptotic-measure tools: orbit histograms on the cylinder,
// uniformity statistics, inverse-branch Jacobian sums and Birkhoff averages.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "skewlab/cylinder.hpp"
#include "skewlab/error.hpp"
#include "skewlab/io.hpp"
#include "skewlab/random.hpp"

namespace skewlab {

class Histogram2D {
 public:
  Histogram2D(std::size_t bins_x, std::size_t bins_y, std::size_t burn_in = 0)
      : bins_x_(bins_x), bins_y_(bins_y), burn_in_(burn_in), counts_(bins_x * bins_y, 0) {
    require(bins_x >= 1 && bins_y >= 1, "histogram needs at least one bin per axis");
  }

  // x in [0,1), y in [0,1]; y = 1 lands in the top bin.
  void add(CylPoint p) {
    const std::size_t ix = std::min(bins_x_ - 1, static_cast<std::size_t>(p.x * static_cast<double>(bins_x_)));
    const std::size_t iy = std::min(bins_y_ - 1, static_cast<std::size_t>(p.y * static_cast<double>(bins_y_)));
    ++counts_[iy * bins_x_ + ix];
    ++total_;
  }

  Histogram2D& operator+=(const Histogram2D& other) {
    require(other.bins_x_ == bins_x_ && other.bins_y_ == bins_y_, "histogram shapes differ");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    total_ += other.total_;
    return *this;
  }

  std::size_t bins_x() const noexcept { return bins_x_; }
  std::size_t bins_y() const noexcept { return bins_y_; }
  std::size_t burn_in() const noexcept { return burn_in_; }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t count(std::size_t ix, std::size_t iy) const { return counts_[iy * bins_x_ + ix]; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  // Fraction of mass in rows whose y-interval lies inside [lo, hi].
  double mass_in_rows(double lo, double hi) const {
    if (total_ == 0) return 0.0;
    std::uint64_t s = 0;
    for (std::size_t iy = 0; iy < bins_y_; ++iy) {
      const double y0 = static_cast<double>(iy) / static_cast<double>(bins_y_);
      const double y1 = static_cast<double>(iy + 1) / static_cast<double>(bins_y_);
      if (y0 < lo || y1 > hi) continue;
      for (std::size_t ix = 0; ix < bins_x_; ++ix) s += count(ix, iy);
    }
    return static_cast<double>(s) / static_cast<double>(total_);
  }

 private:
  std::size_t bins_x_;
  std::size_t bins_y_;
  std::size_t burn_in_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// Bins the orbit points p_i for burn_in <= i < n. Angles follow the digit
// stream orbit of p0.x; y always follows the fiber maps over those angles.
inline Histogram2D orbit_histogram(const CylinderSystem& sys, CylPoint p0, std::size_t n, std::size_t bins_x,
                                   std::size_t bins_y, std::size_t burn_in = 1000, std::uint64_t seed = 1) {
  require(n > burn_in, "orbit_histogram: n must exceed burn_in");
  if (!(p0.y > 0.0 && p0.y < 1.0)) throw DomainError("orbit_histogram: y0 must lie in (0,1)");
  Histogram2D h(bins_x, bins_y, burn_in);
  BaseOrbit base(sys.k(), p0.x, seed);
  double y = p0.y;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = base.angle();
    if (i >= burn_in) h.add({x, y});
    y = eval_fiber(sys.family(), x, y);
    base.advance();
  }
  return h;
}

struct UniformityReport {
  double chi_square = 0.0;
  std::size_t dof = 0;
  double max_rel_dev = 0.0;
};

inline UniformityReport uniformity_stats(const Histogram2D& h) {
  if (h.total() == 0) throw PreconditionError("uniformity_stats: empty histogram");
  const double cells = static_cast<double>(h.bins_x() * h.bins_y());
  const double expected = static_cast<double>(h.total()) / cells;
  UniformityReport r;
  r.dof = h.bins_x() * h.bins_y() - 1;
  for (std::uint64_t c : h.counts()) {
    const double o = static_cast<double>(c);
    r.chi_square += (o - expected) * (o - expected) / expected;
    r.max_rel_dev = std::max(r.max_rel_dev, std::fabs(o / expected - 1.0));
  }
  return r;
}

inline void write_histogram_csv(std::ostream& out, const Histogram2D& h) {
  out << "ix,iy,count\n";
  for (std::size_t iy = 0; iy < h.bins_y(); ++iy) {
    for (std::size_t ix = 0; ix < h.bins_x(); ++ix) out << ix << ',' << iy << ',' << h.count(ix, iy) << '\n';
  }
  check_stream(out, "histogram csv");
}

inline void write_uniformity_csv(std::ostream& out, const UniformityReport& r) {
  out << "chi_square,dof,max_rel_dev\n"
      << format_double(r.chi_square) << ',' << r.dof << ',' << format_double(r.max_rel_dev) << '\n';
  check_stream(out, "uniformity csv");
}

// Sum over the k branches of F^-1 at p of their Jacobians
// (1 + epsilon cos(2 pi x_j) (1 - 2y)) / k, x_j = (x + j) / k.
inline double jacobian_branch_sum(const CylinderSystem& sys, CylPoint p) {
  if (sys.family().kind() != FiberKind::InverseKan) {
    throw PreconditionError("jacobian_branch_sum: family must be inverse-kan");
  }
  const double k = static_cast<double>(sys.k());
  double sum = 0.0;
  for (double xj : preimage_angles(sys.k(), p.x)) {
    sum += kan::derivative(sys.family().kan_parameter(xj), p.y) / k;
  }
  return sum;
}

enum class TestFunction { Y, YSquared, CosX, YTimesCosX };

inline double evaluate(TestFunction chi, CylPoint p) {
  switch (chi) {
    case TestFunction::Y: return p.y;
    case TestFunction::YSquared: return p.y * p.y;
    case TestFunction::CosX: return cos_2pi(p.x);
    case TestFunction::YTimesCosX: return p.y * cos_2pi(p.x);
  }
  return 0.0;
}

inline double birkhoff_average(const CylinderSystem& sys, TestFunction chi, CylPoint p0, std::size_t n,
                               std::size_t burn_in = 1000, std::uint64_t seed = 1) {
  require(n > burn_in, "birkhoff_average: n must exceed burn_in");
  BaseOrbit base(sys.k(), p0.x, seed);
  double y = p0.y;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = base.angle();
    if (i >= burn_in) sum += evaluate(chi, {x, y});
    y = eval_fiber(sys.family(), x, y);
    base.advance();
  }
  return sum / static_cast<double>(n - burn_in);
}

}  // namespace skewlab
