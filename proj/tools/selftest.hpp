#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace skewlab::cli {

struct SelftestOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  std::filesystem::path out_dir = "selftest_artifacts";
  std::uint64_t seed = 20240601;
  bool check_determinism = true;
  bool enforce_runtime = true;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs criteria 1-10 and, when requested, the determinism rerun (11). Each
// result is printed as one "selftest: PASS|FAIL ..." line as it completes.
std::vector<CriterionResult> run_selftest(const SelftestOptions& opts, std::ostream& log);

// Names of the artifact files written into out_dir, in a fixed order.
const std::vector<std::string>& selftest_artifacts();

}  // namespace skewlab::cli
