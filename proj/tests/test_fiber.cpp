#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "skewlab/fiber.hpp"
#include "skewlab/random.hpp"

using namespace skewlab;

namespace {

std::vector<FiberFamily> all_families() {
  return {FiberFamily::kan(0.5), FiberFamily::inverse_kan(0.5),
          FiberFamily::fractional_linear(DisplacementProfile::cosine(0.5)),
          FiberFamily::fractional_linear(DisplacementProfile::step({1.0, -1.0, 0.5}))};
}

}  // namespace

TEST(Fiber, EvalExamples) {
  const auto kan = FiberFamily::kan(0.5);
  EXPECT_EQ(eval_fiber(kan, 0.25, 0.3), 0.3);
  EXPECT_DOUBLE_EQ(eval_fiber(kan, 0.0, 0.5), 0.625);
  const auto fl = FiberFamily::fractional_linear(DisplacementProfile::step({std::log(2.0), 0.0}));
  EXPECT_NEAR(eval_fiber(fl, 0.1, 0.5), 2.0 / 3.0, 1e-15);
  for (const auto& f : all_families()) EXPECT_EQ(eval_fiber(f, 0.37, 0.0), 0.0);
}

TEST(Fiber, DomainErrors) {
  const auto kan = FiberFamily::kan(0.5);
  EXPECT_THROW(eval_fiber(kan, 0.0, 1.5), DomainError);
  EXPECT_THROW(eval_fiber(kan, 0.0, -0.1), DomainError);
  EXPECT_THROW(fiber_derivative(kan, 0.0, 2.0), DomainError);
  EXPECT_THROW(invert_fiber(kan, 0.0, -1e-9), DomainError);
  EXPECT_THROW(eval_fiber(kan, 0.0, std::nan("")), DomainError);
  EXPECT_THROW(FiberFamily::kan(1.0), PreconditionError);
  EXPECT_THROW(FiberFamily::inverse_kan(0.0), PreconditionError);
}

TEST(Fiber, DerivativeExamples) {
  const auto kan = FiberFamily::kan(0.5);
  EXPECT_DOUBLE_EQ(fiber_derivative(kan, 0.0, 0.0), 1.5);
  EXPECT_DOUBLE_EQ(fiber_derivative(kan, 0.0, 1.0), 0.5);
  const auto id = FiberFamily::fractional_linear(DisplacementProfile::step({0.0, 0.0}));
  for (double y = 0.0; y <= 1.0; y += 0.125) EXPECT_EQ(fiber_derivative(id, 0.3, y), 1.0);
}

TEST(Fiber, DerivativeMatchesFiniteDifference) {
  for (const auto& f : all_families()) {
    for (double x : {0.05, 0.3, 0.61, 0.9}) {
      for (double y : {0.1, 0.5, 0.8}) {
        const double h = 1e-6;
        const double fd = (eval_fiber(f, x, y + h) - eval_fiber(f, x, y - h)) / (2 * h);
        EXPECT_NEAR(fiber_derivative(f, x, y), fd, 1e-7) << f.describe();
      }
    }
  }
}

TEST(Fiber, InverseExamples) {
  const auto kan = FiberFamily::kan(0.5);
  EXPECT_DOUBLE_EQ(invert_fiber(kan, 0.0, 0.625), 0.5);
  EXPECT_EQ(invert_fiber(kan, 0.25, 0.4), 0.4);
  const auto inv = FiberFamily::inverse_kan(0.5);
  for (double x : {0.0, 0.1, 0.7}) {
    for (double y : {0.2, 0.5, 0.9}) EXPECT_EQ(invert_fiber(inv, x, y), eval_fiber(kan, x, y));
  }
}

TEST(Fiber, InverseAgreesWithBisectionOracle) {
  Rng rng(7);
  const auto kan = FiberFamily::kan(0.9);
  for (int i = 0; i < 500; ++i) {
    const double x = rng.uniform(), y = rng.uniform();
    const double a = oracle::kan_a(0.9, x);
    EXPECT_NEAR(invert_fiber(kan, x, y), oracle::kan_q_inverse_bisect(a, y), 1e-14);
    EXPECT_NEAR(eval_fiber(kan, x, invert_fiber(kan, x, y)), y, 1e-15);
  }
  // Small a: the stable root form keeps full relative accuracy.
  EXPECT_DOUBLE_EQ(kan::invert(1e-12, 0.3), 0.3 - 1e-12 * 0.3 * 0.7);
}

TEST(Fiber, BoundaryFixingAllFamilies) {
  for (const auto& f : all_families()) {
    for (int i = 0; i < 256; ++i) {
      const double x = i / 256.0 + 1e-3 * (i % 7);
      EXPECT_EQ(eval_fiber(f, x, 0.0), 0.0);
      EXPECT_EQ(eval_fiber(f, x, 1.0), 1.0);
      EXPECT_EQ(invert_fiber(f, x, 0.0), 0.0);
      EXPECT_EQ(invert_fiber(f, x, 1.0), 1.0);
    }
  }
}

TEST(Fiber, MonotoneOnGrid) {
  for (const auto& f : all_families()) {
    for (int i = 0; i < 64; ++i) {
      for (int j = 0; j < 64; ++j) EXPECT_GT(fiber_derivative(f, i / 64.0, j / 63.0), 0.0);
    }
  }
}

TEST(Fiber, SchwarzianExamples) {
  EXPECT_DOUBLE_EQ(schwarzian_analytic(FiberFamily::kan(0.5), 0.0, 0.5), -1.5);
  EXPECT_DOUBLE_EQ(schwarzian_analytic(FiberFamily::inverse_kan(0.5), 0.0, 0.625), 1.5);
  const auto fl = FiberFamily::fractional_linear(DisplacementProfile::cosine(2.0));
  EXPECT_EQ(schwarzian_analytic(fl, 0.3, 0.4), 0.0);
  EXPECT_EQ(schwarzian_analytic(FiberFamily::kan(0.5), 0.25, 0.4), 0.0);
}

TEST(Fiber, SchwarzianNumericExamples) {
  const auto kan = FiberFamily::kan(0.5);
  EXPECT_NEAR(schwarzian_numeric([&](double y) { return eval_fiber(kan, 0.0, y); }, 0.5, 1e-3), -1.5, 1e-4);
  for (double y : {0.1, 0.3, 0.5, 0.77}) {
    EXPECT_NEAR(schwarzian_numeric([](double v) { return v; }, y), 0.0, 1e-8);
  }
  EXPECT_NEAR(schwarzian_numeric([](double v) { return moebius_eval(MoebiusMap{1.0}, v); }, 0.3, 1e-3), 0.0, 1e-4);
  EXPECT_THROW(schwarzian_numeric([](double v) { return v; }, 0.001, 1e-3), DomainError);
  EXPECT_THROW(schwarzian_numeric([](double v) { return v; }, 0.5, 0.0), PreconditionError);
}

TEST(Fiber, SchwarzianNumericMatchesAnalytic) {
  for (const auto& f : all_families()) {
    for (double x : {0.0, 0.1, 0.45, 0.8}) {
      for (double y : {0.1, 0.4, 0.9}) {
        const auto fx = [&](double v) { return eval_fiber(f, x, v); };
        const double exact = schwarzian_analytic(f, x, y);
        const double err = std::fabs(schwarzian_numeric(fx, y, 1e-3) - exact);
        const double err_half = std::fabs(schwarzian_numeric(fx, y, 5e-4) - exact);
        EXPECT_LT(err, 1e-3 * std::max(1.0, std::fabs(exact))) << f.describe() << " x=" << x << " y=" << y;
        // Second-order truncation: halving h cuts the error about fourfold.
        if (err > 1e-4) {
          EXPECT_LT(err_half, 0.35 * err) << f.describe() << " x=" << x << " y=" << y;
        }
      }
    }
  }
}

TEST(Fiber, SchwarzianCompositionLaw) {
  // S(f o g) = (g')^2 (Sf o g) + Sg for Kan quadratics.
  for (double a : {-0.5, -0.3, 0.3, 0.5}) {
    for (double b : {-0.5, -0.3, 0.3, 0.5}) {
      for (int i = 1; i <= 9; ++i) {
        const double y = i / 10.0;
        const double num = schwarzian_numeric([&](double v) { return kan::eval(a, kan::eval(b, v)); }, y);
        const double gp = kan::derivative(b, y);
        const double law = gp * gp * kan::schwarzian(a, kan::eval(b, y)) + kan::schwarzian(b, y);
        EXPECT_NEAR(num, law, 1e-3) << "a=" << a << " b=" << b << " y=" << y;
      }
    }
  }
}

TEST(Fiber, SchwarzianSignTable) {
  Rng rng(11);
  const auto kan = FiberFamily::kan(0.5);
  const auto inv = FiberFamily::inverse_kan(0.5);
  const auto fl = FiberFamily::fractional_linear(DisplacementProfile::cosine(0.8));
  for (int i = 0; i < 2000; ++i) {
    const double x = rng.uniform(), y = rng.uniform();
    if (kan.kan_parameter(x) == 0.0) continue;
    EXPECT_LT(schwarzian_analytic(kan, x, y), 0.0);
    EXPECT_GT(schwarzian_analytic(inv, x, y), 0.0);
    EXPECT_EQ(schwarzian_analytic(fl, x, y), 0.0);
  }
}

TEST(Fiber, InverseSqrtDerivativeIsConvex) {
  // phi = 1 / sqrt(f') is concave upwards when Sf < 0.
  const double a = 0.5;
  const auto phi = [a](double y) { return 1.0 / std::sqrt(kan::derivative(a, y)); };
  const double h = 1e-3;
  for (int i = 1; i <= 100; ++i) {
    const double y = i / 101.0;
    EXPECT_GE(phi(y + h) - 2 * phi(y) + phi(y - h), -1e-9);
  }
}

TEST(Fiber, CrossRatioExamples) {
  EXPECT_NEAR(cross_ratio(0.0, 1.0 / 3, 2.0 / 3, 1.0), 4.0, 1e-14);
  EXPECT_THROW(cross_ratio(0.0, 0.5, 0.5, 1.0), DegenerateError);
  double prev = 1e300;
  for (double d : {1e-1, 1e-3, 1e-6, 1e-9}) {
    const double r = cross_ratio(0.0, 0.5, 0.5 + d, 1.0);
    EXPECT_GT(r, 1.0);
    EXPECT_LT(r, prev);
    prev = r;
  }
  EXPECT_NEAR(prev, 1.0, 1e-8);
}

TEST(Fiber, CrossRatioMonotonicity) {
  Rng rng(2024);
  const auto kan = FiberFamily::kan(0.5);
  const auto inv = FiberFamily::inverse_kan(0.5);
  int checked = 0;
  while (checked < 1000) {
    std::vector<double> q{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    std::sort(q.begin(), q.end());
    const double x = rng.uniform();
    if (std::fabs(cos_2pi(x)) < 1e-2) continue;
    if (q[1] - q[0] < 1e-3 || q[2] - q[1] < 1e-3 || q[3] - q[2] < 1e-3) continue;
    const double r = cross_ratio(q[0], q[1], q[2], q[3]);
    EXPECT_GT(r, 1.0);
    auto image = [&](const FiberFamily& f) {
      return cross_ratio(eval_fiber(f, x, q[0]), eval_fiber(f, x, q[1]), eval_fiber(f, x, q[2]),
                         eval_fiber(f, x, q[3]));
    };
    EXPECT_GT(image(kan), r);
    EXPECT_LT(image(inv), r);
    const MoebiusMap m{rng.uniform(-1.0, 1.0)};
    const double rm = cross_ratio(moebius_eval(m, q[0]), moebius_eval(m, q[1]), moebius_eval(m, q[2]),
                                  moebius_eval(m, q[3]));
    EXPECT_NEAR(rm / r, 1.0, 1e-12);
    ++checked;
  }
}

TEST(Fiber, DerivativeProductAtBoundaries) {
  const auto kan = FiberFamily::kan(0.5);
  for (int i = 0; i < 100; ++i) {
    const double x = i / 100.0 + 0.003;
    const double a = kan.kan_parameter(x);
    const double prod = fiber_derivative(kan, x, 0.0) * fiber_derivative(kan, x, 1.0);
    EXPECT_DOUBLE_EQ(prod, 1.0 - a * a);
    EXPECT_LT(prod, 1.0);
  }
}

TEST(Fiber, OnlyBoundaryFixedPoints) {
  for (double a : {0.1, 0.5, 0.9}) {
    EXPECT_GT(kan::derivative(a, 0.0), 1.0);
    EXPECT_LT(kan::derivative(a, 1.0), 1.0);
    for (int i = 1; i < 10000; ++i) {
      const double y = i / 10000.0;
      EXPECT_GT(kan::eval(a, y) - y, 0.0);
    }
  }
}

TEST(Fiber, PoincareCoordinate) {
  EXPECT_EQ(poincare_coord(0.5), 0.0);
  EXPECT_NEAR(poincare_coord(2.0 / 3.0), 0.693147180559945, 1e-14);
  EXPECT_NEAR(poincare_coord_inv(1.0), 0.731058578630005, 1e-12);
  EXPECT_THROW(poincare_coord(0.0), DomainError);
  EXPECT_THROW(poincare_coord(1.0), DomainError);
  for (double t = -30.0; t <= 30.0; t += 0.25) {
    const double y = poincare_coord_inv(t);
    EXPECT_NEAR(poincare_coord_inv(poincare_coord(y)), y, 1e-12);
  }
  for (double t = -30.0; t <= 5.0; t += 0.25) EXPECT_NEAR(poincare_coord(poincare_coord_inv(t)), t, 1e-12);
}

TEST(Fiber, PoincareDistance) {
  EXPECT_NEAR(poincare_distance(0.25, 0.5), 1.09861228866811, 1e-14);
  EXPECT_EQ(poincare_distance(0.3, 0.3), 0.0);
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    double y1 = rng.uniform(0.001, 0.999), y2 = rng.uniform(0.001, 0.999);
    if (y1 == y2) continue;
    const double lo = std::min(y1, y2), hi = std::max(y1, y2);
    EXPECT_NEAR(poincare_distance(y1, y2), std::fabs(std::log(cross_ratio(0.0, lo, hi, 1.0))), 1e-10);
  }
}

TEST(Fiber, MoebiusGroupLaw) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const double y = rng.uniform();
    EXPECT_EQ(moebius_eval(MoebiusMap{0.0}, y), y);
  }
  EXPECT_NEAR(moebius_eval(MoebiusMap{std::log(2.0)}, 0.5), 2.0 / 3.0, 1e-15);
  for (int i = 0; i < 1000; ++i) {
    const double c = rng.uniform(-4, 4), d = rng.uniform(-4, 4), y = rng.uniform();
    EXPECT_NEAR(moebius_eval(MoebiusMap{c}, moebius_eval(MoebiusMap{d}, y)), moebius_eval(MoebiusMap{c + d}, y),
                1e-12);
    if (y > 1e-3 && y < 1 - 1e-3) {
      EXPECT_NEAR(poincare_coord(moebius_eval(MoebiusMap{c}, y)), poincare_coord(y) + c, 1e-9);
    }
  }
}

TEST(Fiber, DisplacementProfile) {
  const auto s = DisplacementProfile::step({1.0, 1.0, -1.0});
  EXPECT_DOUBLE_EQ(s.mean(), 1.0 / 3.0);
  EXPECT_EQ(s(0.0), 1.0);
  EXPECT_EQ(s(0.5), 1.0);
  EXPECT_EQ(s(0.7), -1.0);
  EXPECT_EQ(s(0.99999999), -1.0);
  EXPECT_EQ(DisplacementProfile::cosine(0.75).mean(), 0.0);
  EXPECT_THROW(DisplacementProfile::step({}), PreconditionError);
  EXPECT_THROW(DisplacementProfile::step({1.0, INFINITY}), PreconditionError);
}
