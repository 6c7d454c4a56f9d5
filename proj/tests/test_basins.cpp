#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "skewlab/basins.hpp"

using namespace skewlab;

namespace {
const CylinderSystem kKan3{3, FiberFamily::kan(0.5)};

BasinRaster make_raster(std::size_t w, std::size_t h, std::vector<BasinClass> cells) {
  return BasinRaster{w, h, std::move(cells), 0, 1e-6, "test"};
}
}  // namespace

TEST(Basins, RasterGeometryAndBottomRow) {
  const auto r = rasterize(kKan3, 64, 4096, 5000, 1e-6, 1);
  ASSERT_EQ(r.cells.size(), 64u * 4096u);
  // Bottom row sits at y = 0.5 / 4096, well inside Basin0 except near x = 0.
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < r.width; ++i) zeros += r.at(i, 0) == BasinClass::Basin0;
  EXPECT_GT(zeros, r.width * 3 / 4);
}

TEST(Basins, SingleCellNoBudget) {
  const auto r = rasterize(kKan3, 1, 1, 0, 1e-6);
  ASSERT_EQ(r.cells.size(), 1u);
  EXPECT_EQ(r.cells[0], BasinClass::Undecided);
  EXPECT_THROW(rasterize(kKan3, 0, 4, 10, 1e-6), PreconditionError);
}

TEST(Basins, KanRasterMostlyDecidedAndSymmetric) {
  const auto r = rasterize(kKan3, 256, 256, 5000, 1e-6);
  const auto f = measure_fractions(r);
  EXPECT_LT(f.undecided, 0.02);
  EXPECT_NEAR(f.basin0, f.basin1, 0.01);
  EXPECT_NEAR(f.basin0 + f.basin1 + f.undecided, 1.0, 1e-12);
}

TEST(Basins, MeasureFractionsExamples) {
  const auto all0 = measure_fractions(make_raster(2, 2, std::vector<BasinClass>(4, BasinClass::Basin0)));
  EXPECT_EQ(all0.basin0, 1.0);
  EXPECT_EQ(all0.basin1, 0.0);
  EXPECT_EQ(all0.undecided, 0.0);
  EXPECT_THROW(measure_fractions(BasinRaster{}), PreconditionError);
}

TEST(Basins, Determinism) {
  const auto a = rasterize(kKan3, 96, 80, 2000, 1e-6, 1);
  const auto b = rasterize(kKan3, 96, 80, 2000, 1e-6, 4);
  EXPECT_EQ(a.cells, b.cells);
}

TEST(Basins, MonotoneBudget) {
  const auto small = rasterize(kKan3, 64, 64, 100, 1e-6);
  const auto large = rasterize(kKan3, 64, 64, 5000, 1e-6);
  for (std::size_t i = 0; i < small.cells.size(); ++i) {
    if (small.cells[i] != BasinClass::Undecided) {
      EXPECT_EQ(small.cells[i], large.cells[i]);
    }
  }
}

TEST(Basins, ProbeKanIntermingled) {
  const auto r = intermingle_probe(kKan3, ProbeParams{});
  EXPECT_GE(r.boxes_both, 90u);
  EXPECT_EQ(r.boxes_both + r.boxes_only0 + r.boxes_only1 + r.boxes_undecided_dominant, r.boxes_total);
  EXPECT_EQ(r.boxes_total, 100u);
}

TEST(Basins, ProbeDeterministicAcrossThreads) {
  ProbeParams p;
  p.num_boxes = 20;
  p.samples_per_box = 50;
  const auto a = intermingle_probe(kKan3, p, 1);
  const auto b = intermingle_probe(kKan3, p, 3);
  EXPECT_EQ(a.boxes_both, b.boxes_both);
  EXPECT_EQ(a.boxes_only0, b.boxes_only0);
  EXPECT_EQ(a.boxes_undecided_dominant, b.boxes_undecided_dominant);
}

TEST(Basins, ProbePreconditions) {
  ProbeParams p;
  p.samples_per_box = 0;
  EXPECT_THROW(intermingle_probe(kKan3, p), PreconditionError);
  p.samples_per_box = 10;
  p.box_side = 0.5;
  EXPECT_THROW(intermingle_probe(kKan3, p), PreconditionError);
}

TEST(Basins, ProbeRegimeContrast) {
  ProbeParams p;
  p.num_boxes = 40;
  p.samples_per_box = 200;
  // Positive Schwarzian: boundaries repel, classification rarely decides.
  const auto inv = intermingle_probe(CylinderSystem(3, FiberFamily::inverse_kan(0.5)), p);
  EXPECT_LE(inv.boxes_both, 4u);
  EXPECT_GE(inv.boxes_undecided_dominant, 36u);
  // Zero Schwarzian, zero mean: the t-walk is recurrent and visits both
  // delta-strips, so first-hit classification reports "both" even though
  // neither basin has positive measure.
  const auto fl = intermingle_probe(
      CylinderSystem(3, FiberFamily::fractional_linear(DisplacementProfile::step({1.0, -1.0, 0.0}))), p);
  EXPECT_GE(fl.boxes_both, 36u);
}

TEST(Basins, IntermingleCsv) {
  IntermingleReport r{100, 95, 2, 3, 0, 1.0 / 64, 500, 7};
  std::ostringstream out;
  write_intermingle_csv(out, r);
  EXPECT_EQ(out.str(),
            "boxes_total,boxes_both,boxes_only0,boxes_only1,boxes_undecided_dominant,box_side,samples_per_box,seed\n"
            "100,95,2,3,0,0.015625,500,7\n");
}

TEST(Basins, PpmSingleCell) {
  std::ostringstream out;
  write_ppm(out, make_raster(1, 1, {BasinClass::Basin0}));
  EXPECT_EQ(out.str(), std::string("P6\n1 1\n255\n") + std::string("\x00\x00\xff", 3));
}

TEST(Basins, PpmTwoCells) {
  std::ostringstream out;
  write_ppm(out, make_raster(2, 1, {BasinClass::Basin0, BasinClass::Basin1}),
            Palette{{0, 0, 255}, {255, 200, 0}, {0, 0, 0}});
  EXPECT_EQ(out.str(), std::string("P6\n2 1\n255\n") + std::string("\x00\x00\xff\xff\xc8\x00", 6));
}

TEST(Basins, PpmTopRowIsHighY) {
  // Row j = 1 (y near 1) is Basin1 and must be written first.
  std::ostringstream out;
  write_ppm(out, make_raster(1, 2, {BasinClass::Basin0, BasinClass::Basin1}));
  const std::string s = out.str();
  const std::string header = "P6\n1 2\n255\n";
  ASSERT_EQ(s.size(), header.size() + 6);
  EXPECT_EQ(s.substr(header.size()), std::string("\xff\xc8\x00\x00\x00\xff", 6));
}

TEST(Basins, PpmDeterministic) {
  const auto r = rasterize(kKan3, 32, 32, 500, 1e-6);
  std::ostringstream a, b;
  write_ppm(a, r);
  write_ppm(b, r);
  EXPECT_EQ(a.str(), b.str());
}
