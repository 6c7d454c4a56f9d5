// Renders the basin picture of the Kan cylinder map and prints the basin
// shares. Usage: riddled_basins [out.ppm] [size]
#include <cstdlib>
#include <iostream>
#include <string>

#include "skewlab/skewlab.hpp"

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : "riddled_basins.ppm";
  const std::size_t size = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 256;

  const skewlab::CylinderSystem sys(3, skewlab::FiberFamily::kan(0.5));
  const auto raster = skewlab::rasterize(sys, size, size, 5000, 1e-6);
  const auto f = skewlab::measure_fractions(raster);

  auto out = skewlab::open_output(path);
  skewlab::write_ppm(out, raster);
  std::cout << sys.describe() << ": basin0 " << f.basin0 << ", basin1 " << f.basin1 << ", undecided "
            << f.undecided << " -> " << path << '\n';
}
