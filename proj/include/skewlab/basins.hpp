#pragma once

// Basin rasters, measure fractions, the intermingling probe, and PPM output.

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "skewlab/cylinder.hpp"
#include "skewlab/error.hpp"
#include "skewlab/io.hpp"
#include "skewlab/parallel.hpp"
#include "skewlab/random.hpp"

namespace skewlab {

struct BasinRaster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<BasinClass> cells;  // row-major, row j holds y = (j + 0.5) / height
  std::size_t n_max = 0;
  double delta = 0.0;
  std::string system;

  BasinClass at(std::size_t i, std::size_t j) const { return cells[j * width + i]; }
};

inline BasinRaster rasterize(const CylinderSystem& sys, std::size_t width, std::size_t height, std::size_t n_max,
                             double delta, unsigned threads = default_threads()) {
  require(width >= 1 && height >= 1, "rasterize: width and height must be >= 1");
  require(delta > 0.0 && delta < 0.5, "rasterize: delta must lie in (0, 0.5)");
  BasinRaster r{width, height, std::vector<BasinClass>(width * height), n_max, delta, sys.describe()};
  parallel_for(height, threads, [&](std::size_t j) {
    const double y = (static_cast<double>(j) + 0.5) / static_cast<double>(height);
    for (std::size_t i = 0; i < width; ++i) {
      const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(width);
      r.cells[j * width + i] = classify_point(sys, {x, y}, n_max, delta);
    }
  });
  return r;
}

struct BasinFractions {
  double basin0 = 0.0;
  double basin1 = 0.0;
  double undecided = 0.0;
};

inline BasinFractions measure_fractions(const BasinRaster& r) {
  require(!r.cells.empty() && r.cells.size() == r.width * r.height, "measure_fractions: invalid raster");
  std::array<std::size_t, 3> count{};
  for (BasinClass c : r.cells) ++count[static_cast<std::size_t>(c)];
  const auto n = static_cast<double>(r.cells.size());
  return {count[0] / n, count[1] / n, count[2] / n};
}

struct ProbeParams {
  std::size_t num_boxes = 100;
  double box_side = 1.0 / 64.0;
  std::size_t samples_per_box = 500;
  std::size_t n_max = 5000;
  double delta = 1e-6;
  std::uint64_t seed = 20240601;
};

struct IntermingleReport {
  std::size_t boxes_total = 0;
  std::size_t boxes_both = 0;
  std::size_t boxes_only0 = 0;
  std::size_t boxes_only1 = 0;
  std::size_t boxes_undecided_dominant = 0;
  double box_side = 0.0;
  std::size_t samples_per_box = 0;
  std::uint64_t seed = 0;
};

// Box centres: x uniform, y uniform in [0.1, 0.9]. A box counts as "both"
// when it holds at least one sample of each basin; otherwise it is
// undecided-dominant if undecided samples outnumber decided ones, else it is
// credited to the basin it saw.
inline IntermingleReport intermingle_probe(const CylinderSystem& sys, const ProbeParams& p,
                                           unsigned threads = default_threads()) {
  require(p.samples_per_box >= 1, "intermingle_probe: samples_per_box must be >= 1");
  require(p.num_boxes >= 1, "intermingle_probe: num_boxes must be >= 1");
  require(p.box_side > 0.0 && p.box_side < 0.5, "intermingle_probe: box_side must lie in (0, 0.5)");
  require(p.delta > 0.0 && p.delta < 0.5, "intermingle_probe: delta must lie in (0, 0.5)");

  std::vector<std::array<std::size_t, 3>> tallies(p.num_boxes);
  parallel_for(p.num_boxes, threads, [&](std::size_t b) {
    Rng rng(derive_seed(p.seed, b));
    const double cx = rng.uniform();
    const double cy = rng.uniform(0.1, 0.9);
    auto& t = tallies[b];
    t = {};
    for (std::size_t s = 0; s < p.samples_per_box; ++s) {
      const double x = wrap_angle(cx + p.box_side * (rng.uniform() - 0.5));
      const double y = cy + p.box_side * (rng.uniform() - 0.5);
      ++t[static_cast<std::size_t>(classify_point(sys, {x, y}, p.n_max, p.delta))];
    }
  });

  IntermingleReport rep;
  rep.boxes_total = p.num_boxes;
  rep.box_side = p.box_side;
  rep.samples_per_box = p.samples_per_box;
  rep.seed = p.seed;
  for (const auto& t : tallies) {
    if (t[0] > 0 && t[1] > 0) {
      ++rep.boxes_both;
    } else if (t[2] > t[0] + t[1]) {
      ++rep.boxes_undecided_dominant;
    } else if (t[0] > 0) {
      ++rep.boxes_only0;
    } else {
      ++rep.boxes_only1;
    }
  }
  return rep;
}

inline void write_intermingle_csv(std::ostream& out, const IntermingleReport& r) {
  out << "boxes_total,boxes_both,boxes_only0,boxes_only1,boxes_undecided_dominant,box_side,samples_per_box,seed\n"
      << r.boxes_total << ',' << r.boxes_both << ',' << r.boxes_only0 << ',' << r.boxes_only1 << ','
      << r.boxes_undecided_dominant << ',' << format_double(r.box_side) << ',' << r.samples_per_box << ','
      << r.seed << '\n';
  check_stream(out, "intermingle csv");
}

using Rgb = std::array<std::uint8_t, 3>;

struct Palette {
  Rgb basin0{0, 0, 255};
  Rgb basin1{255, 200, 0};
  Rgb undecided{0, 0, 0};

  const Rgb& operator[](BasinClass c) const {
    switch (c) {
      case BasinClass::Basin0: return basin0;
      case BasinClass::Basin1: return basin1;
      default: return undecided;
    }
  }
};

// Binary P6; the first image row is the raster row nearest y = 1.
inline void write_ppm(std::ostream& out, const BasinRaster& r, const Palette& palette = {}) {
  require(r.cells.size() == r.width * r.height && !r.cells.empty(), "write_ppm: invalid raster");
  out << "P6\n" << r.width << ' ' << r.height << "\n255\n";
  std::vector<char> row(r.width * 3);
  for (std::size_t jj = 0; jj < r.height; ++jj) {
    const std::size_t j = r.height - 1 - jj;
    for (std::size_t i = 0; i < r.width; ++i) {
      const Rgb& c = palette[r.at(i, j)];
      for (int ch = 0; ch < 3; ++ch) row[i * 3 + ch] = static_cast<char>(c[ch]);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  check_stream(out, "ppm");
}

}  // namespace skewlab
