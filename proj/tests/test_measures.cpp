#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "skewlab/measures.hpp"

using namespace skewlab;

namespace {
const CylinderSystem kInv3{3, FiberFamily::inverse_kan(0.5)};
const CylinderSystem kKan3{3, FiberFamily::kan(0.5)};
const CylPoint kStart{0.2718281828459045, 0.3141592653589793};
}  // namespace

TEST(Measures, HistogramConservation) {
  const auto h = orbit_histogram(kInv3, kStart, 5000, 8, 8, 1000, 3);
  EXPECT_EQ(h.total(), 4000u);
  std::uint64_t s = 0;
  for (auto c : h.counts()) s += c;
  EXPECT_EQ(s, h.total());
  const auto single = orbit_histogram(kInv3, kStart, 11, 4, 4, 10);
  EXPECT_EQ(single.total(), 1u);
}

TEST(Measures, HistogramPreconditions) {
  EXPECT_THROW(orbit_histogram(kInv3, kStart, 10, 4, 4, 10), PreconditionError);
  EXPECT_THROW(orbit_histogram(kInv3, {0.1, 0.0}, 100, 4, 4, 10), DomainError);
  EXPECT_THROW(Histogram2D(0, 4), PreconditionError);
}

TEST(Measures, HistogramMergeIsAdditive) {
  Histogram2D a(4, 4), b(4, 4);
  a.add({0.1, 0.1});
  b.add({0.9, 1.0});
  b.add({0.1, 0.1});
  Histogram2D ab = a, ba = b;
  ab += b;
  ba += a;
  EXPECT_EQ(ab.counts(), ba.counts());
  EXPECT_EQ(ab.total(), 3u);
  EXPECT_EQ(ab.count(0, 0), 2u);
  EXPECT_EQ(ab.count(3, 3), 1u);
  EXPECT_THROW(ab += Histogram2D(2, 2), PreconditionError);
}

TEST(Measures, UniformityExamples) {
  Histogram2D u(2, 2);
  for (double x : {0.25, 0.75}) {
    for (double y : {0.25, 0.75}) u.add({x, y});
  }
  const auto ru = uniformity_stats(u);
  EXPECT_EQ(ru.chi_square, 0.0);
  EXPECT_EQ(ru.max_rel_dev, 0.0);
  EXPECT_EQ(ru.dof, 3u);

  Histogram2D one(2, 2);
  for (int i = 0; i < 4; ++i) one.add({0.1, 0.1});
  const auto r1 = uniformity_stats(one);
  EXPECT_DOUBLE_EQ(r1.chi_square, 12.0);
  EXPECT_DOUBLE_EQ(r1.max_rel_dev, 3.0);

  EXPECT_THROW(uniformity_stats(Histogram2D(2, 2)), PreconditionError);
}

TEST(Measures, InverseKanOrbitIsUniform) {
  const auto h = orbit_histogram(kInv3, kStart, 1000000, 16, 16, 1000, 11);
  EXPECT_LT(uniformity_stats(h).max_rel_dev, 0.1);
}

TEST(Measures, KanOrbitCollapsesToBoundary) {
  const auto h = orbit_histogram(kKan3, kStart, 1000000, 16, 16, 1000, 11);
  EXPECT_LT(h.mass_in_rows(0.125, 0.875), 0.05);
  EXPECT_GT(uniformity_stats(h).max_rel_dev, 1.0);
}

TEST(Measures, JacobianBranchSum) {
  EXPECT_NEAR(jacobian_branch_sum(kInv3, {0.2, 0.7}), 1.0, 1e-12);
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_NEAR(jacobian_branch_sum(kInv3, {rng.uniform(), rng.uniform()}), 1.0, 1e-12);
  }
  for (int k = 2; k <= 7; ++k) {
    const CylinderSystem s(k, FiberFamily::inverse_kan(0.9));
    EXPECT_NEAR(jacobian_branch_sum(s, {0.37, 0.11}), 1.0, 1e-12);
  }
  EXPECT_THROW(jacobian_branch_sum(kKan3, {0.2, 0.7}), PreconditionError);
}

TEST(Measures, JacobianBranchesWithTinyEpsilon) {
  // epsilon -> 0: each branch contributes 1/k.
  const CylinderSystem s(4, FiberFamily::inverse_kan(1e-300));
  for (double xj : preimage_angles(4, 0.3)) {
    EXPECT_EQ(kan::derivative(s.family().kan_parameter(xj), 0.6) / 4.0, 0.25);
  }
  EXPECT_EQ(jacobian_branch_sum(s, {0.3, 0.6}), 1.0);
}

TEST(Measures, BirkhoffAveragesMatchSpaceAverages) {
  EXPECT_NEAR(birkhoff_average(kInv3, TestFunction::Y, kStart, 1000000, 1000, 21), 0.5, 0.01);
  EXPECT_NEAR(birkhoff_average(kInv3, TestFunction::YSquared, kStart, 1000000, 1000, 22), 1.0 / 3.0, 0.01);
  EXPECT_NEAR(birkhoff_average(kInv3, TestFunction::CosX, kStart, 1000000, 1000, 23), 0.0, 0.01);
  // Lebesgue-invariance makes y and x independent under the limit measure.
  EXPECT_NEAR(birkhoff_average(kInv3, TestFunction::YTimesCosX, kStart, 1000000, 1000, 24), 0.0, 0.01);
  EXPECT_THROW(birkhoff_average(kInv3, TestFunction::Y, kStart, 10, 10), PreconditionError);
}

TEST(Measures, LebesgueInvariantUnderOneStep) {
  Rng rng(31);
  Histogram2D before(16, 16), after(16, 16);
  for (int i = 0; i < 1000000; ++i) {
    const CylPoint p{rng.uniform(), rng.uniform()};
    before.add(p);
    after.add(step(kInv3, p));
  }
  EXPECT_LT(std::fabs(uniformity_stats(after).max_rel_dev - uniformity_stats(before).max_rel_dev), 0.02);
}

TEST(Measures, HistogramCsv) {
  Histogram2D h(2, 1);
  h.add({0.7, 0.5});
  std::ostringstream out;
  write_histogram_csv(out, h);
  EXPECT_EQ(out.str(), "ix,iy,count\n0,0,0\n1,0,1\n");
}
