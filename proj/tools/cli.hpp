#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace skewlab::cli {

// Bad command line: exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::uint64_t kDefaultSeed = 20240601;

// Validated command: subcommand name plus every flag any subcommand reads.
// Defaults are the desk-scale acceptance parameters.
struct Command {
  std::string name;

  // system
  std::string family = "kan";
  double epsilon = 0.5;
  int k = 3;
  std::vector<std::string> steps;  // step values as written ("1", "-1/2", "0.7"); empty: not given
  double amplitude = 0.0;          // fractional-linear cosine profile, used when steps is empty

  // shared
  unsigned threads = 0;  // 0: hardware concurrency
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string csv;

  // lyap
  std::size_t nodes = 4096;
  std::size_t birkhoff = 0;
  double x0 = 0.2718281828459045;

  // basins / intermingle / separator
  std::size_t width = 512;
  std::size_t height = 512;
  std::size_t max_iter = 5000;
  double delta = 1e-6;
  std::size_t boxes = 100;
  double side = 1.0 / 64.0;
  std::size_t samples = 500;
  std::size_t angles = 200;
  double tol = 1e-5;

  // histogram / jacobian-check
  std::size_t n = 1000000;
  std::size_t bins_x = 16;
  std::size_t bins_y = 16;
  std::size_t burn_in = 1000;
  double y0 = 0.3141592653589793;
  std::size_t points = 1000;

  // walk / arcsine / equidist (steps default to 1,-1)
  double t0 = 0.0;
  double threshold = 1.0;
  std::size_t every = 1000;
  std::size_t walks = 2000;
  std::vector<double> eps_list{0.25, 0.5, 0.75, 1.0};
  std::string modulus = "pi";
  std::size_t bins = 100;

  // backward
  double x = 0.1;
  double y = 0.5;
  double target = -1.0;  // < 0: canonical fixed angle
  std::size_t depth = 200;

  // selftest
  std::string out_dir = "selftest_artifacts";
  bool skip_determinism = false;
  bool no_time_limits = false;

  // --help: print help_text and exit 0
  bool show_help = false;
  std::string help_text;
};

const std::vector<std::string>& subcommands();

// Parses argv-style tokens (without the program name).
Command parse(const std::vector<std::string>& args);

int run(const Command& cmd, std::ostream& out, std::ostream& err);

// parse + run with exit-code mapping.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skewlab::cli
