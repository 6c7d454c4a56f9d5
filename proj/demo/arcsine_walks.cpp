// Fraction of time a +-1 walk spends above zero, against the arcsine law.
#include <cstdio>

#include "skewlab/skewlab.hpp"

int main() {
  const auto profile = skewlab::DisplacementProfile::step({1.0, -1.0});
  const auto rows = skewlab::arcsine_ensemble(profile, 10000, 4000, {0.1, 0.25, 0.5, 0.75, 0.9}, 7);
  std::printf("%-6s %-10s %-10s\n", "eps", "observed", "arcsine");
  for (const auto& r : rows) std::printf("%-6.2f %-10.4f %-10.4f\n", r.eps, r.empirical, r.theoretical);
}
