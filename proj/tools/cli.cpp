#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <numbers>
#include <optional>
#include <system_error>

#include "selftest.hpp"
#include "skewlab/skewlab.hpp"

namespace skewlab::cli {
namespace {

[[noreturn]] void bad(const std::string& flag, const std::string& msg) { throw UsageError(flag + ": " + msg); }

std::string join(const std::vector<std::string>& v, const std::string& sep = ", ") {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : sep) + x;
  return s;
}

bool uses_system(const std::string& name) {
  return name == "lyap" || name == "basins" || name == "intermingle" || name == "separator" ||
         name == "histogram" || name == "jacobian-check" || name == "backward";
}

bool uses_walk_steps(const std::string& name) { return name == "walk" || name == "arcsine" || name == "equidist"; }

void add_system(CLI::App& app, Command& c) {
  app.add_option("--family", c.family, "kan, inverse-kan or fl")->check(CLI::IsMember({"kan", "inverse-kan", "fl"}));
  app.add_option("--epsilon", c.epsilon, "Kan amplitude, in (0,1)");
  app.add_option("--k", c.k, "base multiplier, >= 2");
  app.add_option("--steps", c.steps, "fl step values, comma separated (k of them)")->delimiter(',');
  app.add_option("--amplitude", c.amplitude, "fl cosine displacement amplitude");
}

void add_walk_steps(CLI::App& app, Command& c) {
  app.add_option("--steps", c.steps, "step values, comma separated (default 1,-1)")->delimiter(',');
}

// Counts also accept exact integers in scientific notation ("1e6").
const CLI::Validator kCount(
    [](std::string& s) {
      if (s.find_first_of("eE") == std::string::npos) return std::string();
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (*end != '\0' || !(v >= 0.0) || v > 9e15 || v != std::floor(v)) return "not a non-negative integer: " + s;
      s = std::to_string(static_cast<std::uint64_t>(v));
      return std::string();
    },
    "COUNT");

CLI::Option* add_count(CLI::App& app, const std::string& flag, std::size_t& value, const std::string& desc = "") {
  return app.add_option(flag, value, desc)->transform(kCount);
}

void add_threads(CLI::App& app, Command& c) { app.add_option("--threads", c.threads, "worker cap (0: all cores)"); }
void add_seed(CLI::App& app, Command& c) { app.add_option("--seed", c.seed, "random seed"); }
void add_csv(CLI::App& app, Command& c) { app.add_option("--csv", c.csv, "CSV output path"); }

std::vector<Rational> step_rationals(const Command& c) {
  std::vector<Rational> r;
  for (const auto& s : c.steps) {
    try {
      r.push_back(Rational::parse(s));
    } catch (const std::exception& e) {
      bad("--steps", e.what());
    }
  }
  return r;
}

std::vector<double> step_values(const Command& c) {
  std::vector<double> v;
  for (const auto& r : step_rationals(c)) v.push_back(static_cast<double>(r.num) / static_cast<double>(r.den));
  return v;
}

DisplacementProfile make_profile(const Command& c) {
  if (!c.steps.empty()) return DisplacementProfile::step(step_values(c));
  return DisplacementProfile::cosine(c.amplitude);
}

CylinderSystem make_system(const Command& c) {
  if (c.family == "kan") return {c.k, FiberFamily::kan(c.epsilon)};
  if (c.family == "inverse-kan") return {c.k, FiberFamily::inverse_kan(c.epsilon)};
  return {c.k, FiberFamily::fractional_linear(make_profile(c))};
}

Modulus parse_modulus(const std::string& s) {
  if (s == "pi") return Modulus::irrational(std::numbers::pi);
  if (s == "e") return Modulus::irrational(std::numbers::e);
  if (s == "sqrt2") return Modulus::irrational(std::numbers::sqrt2);
  Rational r;
  try {
    r = Rational::parse(s);
  } catch (const std::exception& e) {
    bad("--modulus", std::string(e.what()) + " (expected pi, e, sqrt2 or a rational p/q)");
  }
  if (r.num <= 0) bad("--modulus", "must be positive");
  return Modulus::rational(r);
}

void validate(Command& c, const CLI::App& app) {
  const auto given = [&](const char* flag) { return app.count(flag) > 0; };

  if (uses_system(c.name)) {
    if (c.family != "fl" && !(c.epsilon > 0.0 && c.epsilon < 1.0)) bad("--epsilon", "must lie in (0,1)");
    if (c.family == "fl") {
      if (c.steps.empty() && !given("--amplitude")) bad("--family", "fl needs --steps or --amplitude");
      if (!c.steps.empty() && !given("--k")) c.k = static_cast<int>(c.steps.size());
      if (!std::isfinite(c.amplitude)) bad("--amplitude", "must be finite");
    } else if (!c.steps.empty()) {
      bad("--steps", "only applies to --family fl");
    }
    if (c.k < 2) bad("--k", "must be >= 2");
    if (c.k > 1000) bad("--k", "must be <= 1000");
    try {
      (void)make_system(c);
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      bad(c.family == "fl" && !c.steps.empty() ? "--steps" : "--family", e.what());
    }
  }
  if (uses_walk_steps(c.name)) {
    if (c.steps.empty()) c.steps = {"1", "-1"};
    (void)step_rationals(c);
  }

  const auto unit_open = [](double v) { return v > 0.0 && v < 1.0; };
  if (c.name == "lyap") {
    if (c.nodes < 16) bad("--nodes", "must be >= 16");
    if (!(c.x0 >= 0.0 && c.x0 < 1.0)) bad("--x0", "must lie in [0,1)");
  }
  if (c.name == "basins" || c.name == "intermingle" || c.name == "separator") {
    if (!(c.delta > 0.0 && c.delta < 0.5)) bad("--delta", "must lie in (0,0.5)");
  }
  if (c.name == "basins") {
    if (c.width < 1) bad("--width", "must be >= 1");
    if (c.height < 1) bad("--height", "must be >= 1");
  }
  if (c.name == "intermingle") {
    if (c.boxes < 1) bad("--boxes", "must be >= 1");
    if (!(c.side > 0.0 && c.side < 0.5)) bad("--side", "must lie in (0,0.5)");
    if (c.samples < 1) bad("--samples", "must be >= 1");
  }
  if (c.name == "separator") {
    if (c.family != "kan") bad("--family", "separator needs the kan family");
    if (c.angles < 1) bad("--angles", "must be >= 1");
    if (!(c.tol > 0.0)) bad("--tol", "must be positive");
  }
  if (c.name == "histogram") {
    if (c.bins_x < 1) bad("--bins-x", "must be >= 1");
    if (c.bins_y < 1) bad("--bins-y", "must be >= 1");
    if (c.n <= c.burn_in) bad("--n", "must exceed --burn-in");
    if (!(c.x0 >= 0.0 && c.x0 < 1.0)) bad("--x0", "must lie in [0,1)");
    if (!(c.y0 >= 0.0 && c.y0 <= 1.0)) bad("--y0", "must lie in [0,1]");
  }
  if (c.name == "jacobian-check") {
    if (c.family != "inverse-kan") bad("--family", "jacobian-check needs the inverse-kan family");
    if (c.points < 1) bad("--points", "must be >= 1");
  }
  if (c.name == "walk") {
    if (c.n < 1) bad("--n", "must be >= 1");
    if (!(c.threshold >= 0.0)) bad("--threshold", "must be >= 0");
    if (c.every < 1) bad("--every", "must be >= 1");
    if (!std::isfinite(c.t0)) bad("--t0", "must be finite");
  }
  if (c.name == "arcsine") {
    if (!given("--n")) c.n = 10000;
    if (c.n < 1) bad("--n", "must be >= 1");
    if (c.walks < 1) bad("--walks", "must be >= 1");
    for (double e : c.eps_list) {
      if (!(e > 0.0 && e <= 1.0)) bad("--eps", "values must lie in (0,1]");
    }
    if (std::fabs(DisplacementProfile::step(step_values(c)).mean()) > 1e-12) bad("--steps", "must have zero mean");
  }
  if (c.name == "equidist") {
    if (c.n < 1) bad("--n", "must be >= 1");
    if (c.bins < 2) bad("--bins", "must be >= 2");
    if (!std::isfinite(c.t0)) bad("--t0", "must be finite");
    (void)parse_modulus(c.modulus);
  }
  if (c.name == "backward") {
    if (c.family == "fl") bad("--family", "backward needs kan or inverse-kan");
    if (!(c.x >= 0.0 && c.x < 1.0)) bad("--x", "must lie in [0,1)");
    if (!unit_open(c.y)) bad("--y", "must lie in (0,1)");
    if (c.target >= 0.0 && !is_periodic_angle(c.k, c.target, 1)) bad("--target", "must be fixed under x -> kx");
    if (c.target >= 1.0) bad("--target", "must lie in [0,1)");
  }
}

std::string fmt(double v) { return format_double(v); }

void write_csv_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  auto out = open_output(path);
  body(out);
  out.flush();
  check_stream(out, path);
}

int run_lyap(const Command& c, std::ostream& out) {
  const auto sys = make_system(c);
  const auto r = exponent_report(sys, c.nodes);
  out << "lyap: system " << sys.describe() << ", quadrature with " << c.nodes << " nodes\n";
  out << "lyap: lyap0=" << fmt(r.lyap0) << " lyap1=" << fmt(r.lyap1) << " sum_sign=" << r.sum_sign << '\n';
  std::optional<std::pair<double, double>> birk;
  if (c.birkhoff > 0) {
    birk = {transverse_exponent_birkhoff(sys, 0, c.x0, c.birkhoff, c.seed),
            transverse_exponent_birkhoff(sys, 1, c.x0, c.birkhoff, c.seed)};
    out << "lyap: birkhoff n=" << c.birkhoff << " lyap0=" << fmt(birk->first) << " lyap1=" << fmt(birk->second)
        << '\n';
  }
  if (!c.csv.empty()) {
    write_csv_file(c.csv, [&](std::ostream& f) {
      f << "method,resolution,lyap0,lyap1\n";
      f << "quadrature," << c.nodes << ',' << fmt(r.lyap0) << ',' << fmt(r.lyap1) << '\n';
      if (birk) f << "birkhoff," << c.birkhoff << ',' << fmt(birk->first) << ',' << fmt(birk->second) << '\n';
    });
  }
  return kExitOk;
}

int run_basins(const Command& c, std::ostream& out) {
  const auto sys = make_system(c);
  const auto raster = rasterize(sys, c.width, c.height, c.max_iter, c.delta, c.threads);
  const auto f = measure_fractions(raster);
  if (!c.out.empty()) {
    auto ppm = open_output(c.out);
    write_ppm(ppm, raster);
  }
  if (!c.csv.empty()) {
    write_csv_file(c.csv, [&](std::ostream& s) {
      s << "basin0,basin1,undecided\n" << fmt(f.basin0) << ',' << fmt(f.basin1) << ',' << fmt(f.undecided) << '\n';
    });
  }
  out << "basins: " << c.width << "x" << c.height << " " << sys.describe() << " n_max=" << c.max_iter
      << " delta=" << fmt(c.delta) << '\n';
  out << "basins: frac0=" << fmt(f.basin0) << " frac1=" << fmt(f.basin1) << " undecided=" << fmt(f.undecided)
      << '\n';
  if (!c.out.empty()) out << "basins: wrote " << c.out << '\n';
  return kExitOk;
}

int run_intermingle(const Command& c, std::ostream& out) {
  const auto sys = make_system(c);
  ProbeParams p;
  p.num_boxes = c.boxes;
  p.box_side = c.side;
  p.samples_per_box = c.samples;
  p.n_max = c.max_iter;
  p.delta = c.delta;
  p.seed = c.seed;
  const auto r = intermingle_probe(sys, p, c.threads);
  if (!c.csv.empty()) write_csv_file(c.csv, [&](std::ostream& s) { write_intermingle_csv(s, r); });
  out << "intermingle: " << sys.describe() << " boxes=" << r.boxes_total << " side=" << fmt(r.box_side)
      << " samples=" << r.samples_per_box << '\n';
  out << "intermingle: both=" << r.boxes_both << " only0=" << r.boxes_only0 << " only1=" << r.boxes_only1
      << " undecided_dominant=" << r.boxes_undecided_dominant << '\n';
  return kExitOk;
}

int run_separator(const Command& c, std::ostream& out) {
  const auto sys = make_system(c);
  Rng rng(c.seed);
  std::vector<double> xs(c.angles);
  for (auto& x : xs) x = rng.uniform();
  std::vector<SeparatorSample> at_x(xs.size()), at_kx(xs.size());
  parallel_for(xs.size(), c.threads, [&](std::size_t i) {
    at_x[i] = estimate_separator(sys, xs[i], c.max_iter, c.delta, c.tol);
    at_kx[i] = estimate_separator(sys, times_k_mod1(c.k, xs[i]), c.max_iter, c.delta, c.tol);
  });
  std::size_t decided = 0, good = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!at_x[i].decided || !at_kx[i].decided) continue;
    ++decided;
    const double res = std::fabs(at_kx[i].sigma - eval_fiber(sys.family(), xs[i], at_x[i].sigma));
    worst = std::max(worst, res);
    good += res < 1e-2;
  }
  if (!c.csv.empty()) {
    write_csv_file(c.csv, [&](std::ostream& s) {
      s << "x,sigma,bracket,decided\n";
      for (const auto& v : at_x) s << fmt(v.x) << ',' << fmt(v.sigma) << ',' << fmt(v.bracket) << ',' << v.decided << '\n';
    });
  }
  const auto s0 = estimate_separator(sys, 0.0, c.max_iter, c.delta, c.tol);
  out << "separator: " << sys.describe() << " angles=" << xs.size() << " decided=" << decided << '\n';
  out << "separator: functional equation within 1e-2 for " << good << "/" << decided
      << " decided angles, max residual " << fmt(worst) << '\n';
  out << "separator: sigma(0)=" << fmt(s0.sigma);
  if (c.k >= 3) {
    const double xf = canonical_fixed_angle(c.k);
    out << " sigma(" << fmt(xf) << ")=" << fmt(estimate_separator(sys, xf, c.max_iter, c.delta, c.tol).sigma);
  }
  out << '\n';
  return kExitOk;
}

int run_histogram(const Command& c, std::ostream& out) {
  const auto sys = make_system(c);
  const auto h = orbit_histogram(sys, {c.x0, c.y0}, c.n, c.bins_x, c.bins_y, c.burn_in, c.seed);
  const auto u = uniformity_stats(h);
  if (!c.csv.empty()) write_csv_file(c.csv, [&](std::ostream& s) { write_histogram_csv(s, h); });
  out << "histogram: " << sys.describe() << " n=" << c.n << " bins=" << c.bins_x << "x" << c.bins_y
      << " points=" << h.total() << '\n';
  out << "histogram: chi_square=" << fmt(u.chi_square) << " dof=" << u.dof << " max_rel_dev=" << fmt(u.max_rel_dev)
      << " interior_mass=" << fmt(h.mass_in_rows(0.1, 0.9)) << '\n';
  return kExitOk;
}

int run_jacobian(const Command& c, std::ostream& out) {
  const auto sys = make_system(c);
  Rng rng(c.seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < c.points; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    worst = std::max(worst, std::fabs(jacobian_branch_sum(sys, {x, y}) - 1.0));
  }
  out << "jacobian-check: " << sys.describe() << " points=" << c.points << " max_abs_dev=" << fmt(worst) << '\n';
  return kExitOk;
}

int run_walk(const Command& c, std::ostream& out) {
  const auto profile = DisplacementProfile::step(step_values(c));
  const auto trace = simulate_walk(profile, c.t0, c.n, c.seed);
  const auto s = occupation_ratios(trace, c.threshold);
  if (!c.csv.empty()) write_csv_file(c.csv, [&](std::ostream& f) { write_occupation_csv(f, s, c.every); });
  out << "walk: steps=" << join(c.steps, ",") << " mean=" << fmt(average_displacement(profile)) << " n=" << c.n
      << " threshold=" << fmt(c.threshold) << '\n';
  out << "walk: a/n=" << fmt(s.a_ratio(c.n)) << " b/n=" << fmt(s.b_ratio(c.n)) << " c/n=" << fmt(s.c_ratio(c.n))
      << " t_n=" << fmt(trace.t.back()) << '\n';
  return kExitOk;
}

int run_arcsine(const Command& c, std::ostream& out) {
  const auto profile = DisplacementProfile::step(step_values(c));
  const auto rows = arcsine_ensemble(profile, c.n, c.walks, c.eps_list, c.seed, c.threads);
  if (!c.csv.empty()) write_csv_file(c.csv, [&](std::ostream& f) { write_arcsine_csv(f, rows); });
  out << "arcsine: walks=" << c.walks << " n=" << c.n << '\n';
  for (const auto& r : rows) {
    out << "arcsine: eps=" << fmt(r.eps) << " empirical=" << fmt(r.empirical) << " limit=" << fmt(r.theoretical)
        << '\n';
  }
  return kExitOk;
}

int run_equidist(const Command& c, std::ostream& out) {
  const auto modulus = parse_modulus(c.modulus);
  const auto trace = simulate_walk(DisplacementProfile::step(step_values(c)), c.t0, c.n, c.seed);
  const auto r = circle_equidistribution(trace, modulus.approx, c.bins);
  const auto values = step_rationals(c);
  const bool cyclic = cyclic_support_check(values, modulus);
  if (!c.csv.empty()) {
    write_csv_file(c.csv, [&](std::ostream& f) {
      f << "modulus,irrational,cyclic_check,cdf_deviation\n"
        << c.modulus << ',' << modulus.is_irrational() << ',' << cyclic << ',' << fmt(r.cdf_deviation) << '\n';
    });
  }
  out << "equidist: modulus=" << c.modulus << (modulus.is_irrational() ? " (irrational)" : "") << " n=" << c.n
      << " bins=" << c.bins << '\n';
  out << "equidist: cdf_deviation=" << fmt(r.cdf_deviation) << " cyclic_support=" << (cyclic ? "true" : "false");
  if (!modulus.is_irrational()) out << " subgroup_order=" << cyclic_subgroup_order(values, modulus);
  out << '\n';
  return kExitOk;
}

int run_backward(const Command& c, std::ostream& out) {
  const auto sys = make_system(c);
  const double target = c.target >= 0.0 ? c.target : (c.k >= 3 ? canonical_fixed_angle(c.k) : 0.0);
  const auto path = backward_orbit_toward(sys, {c.x, c.y}, target, c.depth);
  if (!c.csv.empty()) {
    write_csv_file(c.csv, [&](std::ostream& f) {
      f << "i,x,y\n";
      for (std::size_t i = 0; i < path.size(); ++i) f << i << ',' << fmt(path[i].x) << ',' << fmt(path[i].y) << '\n';
    });
  }
  const auto end = path.back();
  out << "backward: " << sys.describe() << " from (" << fmt(c.x) << ", " << fmt(c.y) << ") toward x=" << fmt(target)
      << " steps=" << c.depth << '\n';
  out << "backward: end x=" << fmt(end.x) << " y=" << fmt(end.y) << " distance=" << fmt(circle_distance(end.x, target))
      << '\n';
  return kExitOk;
}

int run_selftest_cmd(const Command& c, std::ostream& out) {
  SelftestOptions o;
  o.threads = c.threads;
  o.out_dir = c.out_dir;
  o.seed = c.seed;
  o.check_determinism = !c.skip_determinism;
  o.enforce_runtime = !c.no_time_limits;
  const auto results = run_selftest(o, out);
  const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"lyap",   "basins",  "intermingle", "separator",
                                              "histogram", "jacobian-check", "walk", "arcsine",
                                              "equidist",  "backward", "selftest"};
  return names;
}

Command parse(const std::vector<std::string>& args) {
  const std::string valid = "valid subcommands: " + join(subcommands());
  Command c;
  if (args.empty()) throw UsageError("missing subcommand; " + valid);
  if (args[0] == "-h" || args[0] == "--help") {
    c.name = "help";
    c.show_help = true;
    c.help_text = "usage: skewlab <subcommand> [flags]\n" + valid + "\nrun 'skewlab <subcommand> --help' for flags\n";
    return c;
  }
  const auto& names = subcommands();
  if (std::find(names.begin(), names.end(), args[0]) == names.end()) {
    throw UsageError("unknown subcommand '" + args[0] + "'; " + valid);
  }
  c.name = args[0];

  CLI::App app("skewlab " + c.name, "skewlab " + c.name);
  if (uses_system(c.name)) add_system(app, c);
  if (uses_walk_steps(c.name)) add_walk_steps(app, c);

  if (c.name == "lyap") {
    add_count(app, "--nodes", c.nodes, "quadrature nodes");
    add_count(app, "--birkhoff", c.birkhoff, "also run a Birkhoff estimate of this length");
    app.add_option("--x0", c.x0, "Birkhoff start angle");
    add_seed(app, c);
    add_csv(app, c);
  } else if (c.name == "basins") {
    add_count(app, "--width", c.width);
    add_count(app, "--height", c.height);
    add_count(app, "--max-iter", c.max_iter);
    app.add_option("--delta", c.delta);
    app.add_option("--out", c.out, "PPM output path");
    add_csv(app, c);
    add_threads(app, c);
  } else if (c.name == "intermingle") {
    add_count(app, "--boxes", c.boxes);
    app.add_option("--side", c.side);
    add_count(app, "--samples", c.samples);
    add_count(app, "--max-iter", c.max_iter);
    app.add_option("--delta", c.delta);
    add_seed(app, c);
    add_csv(app, c);
    add_threads(app, c);
  } else if (c.name == "separator") {
    add_count(app, "--angles", c.angles);
    add_count(app, "--max-iter", c.max_iter);
    app.add_option("--delta", c.delta);
    app.add_option("--tol", c.tol);
    add_seed(app, c);
    add_csv(app, c);
    add_threads(app, c);
  } else if (c.name == "histogram") {
    add_count(app, "--n", c.n, "orbit length");
    add_count(app, "--bins-x", c.bins_x);
    add_count(app, "--bins-y", c.bins_y);
    add_count(app, "--burn-in", c.burn_in);
    app.add_option("--x0", c.x0);
    app.add_option("--y0", c.y0);
    add_seed(app, c);
    add_csv(app, c);
  } else if (c.name == "jacobian-check") {
    add_count(app, "--points", c.points);
    add_seed(app, c);
  } else if (c.name == "walk") {
    add_count(app, "--n", c.n, "walk length");
    app.add_option("--t0", c.t0);
    app.add_option("--threshold", c.threshold, "band half-width N");
    add_count(app, "--every", c.every, "CSV row stride");
    add_seed(app, c);
    add_csv(app, c);
  } else if (c.name == "arcsine") {
    add_count(app, "--n", c.n, "walk length (default 10000)");
    add_count(app, "--walks", c.walks);
    app.add_option("--eps", c.eps_list, "comma separated")->delimiter(',');
    add_seed(app, c);
    add_csv(app, c);
    add_threads(app, c);
  } else if (c.name == "equidist") {
    add_count(app, "--n", c.n, "walk length");
    app.add_option("--t0", c.t0);
    app.add_option("--modulus", c.modulus, "pi, e, sqrt2 or a rational p/q");
    add_count(app, "--bins", c.bins);
    add_seed(app, c);
    add_csv(app, c);
  } else if (c.name == "backward") {
    app.add_option("--x", c.x);
    app.add_option("--y", c.y);
    app.add_option("--target", c.target, "fixed angle (default: canonical)");
    add_count(app, "--depth", c.depth, "backward steps");
    add_csv(app, c);
  } else if (c.name == "selftest") {
    app.add_option("--out-dir", c.out_dir, "artifact directory");
    app.add_flag("--no-determinism", c.skip_determinism, "skip the 1 vs 8 thread rerun");
    app.add_flag("--no-time-limits", c.no_time_limits, "do not fail on runtime budgets");
    add_seed(app, c);
    add_threads(app, c);
  }

  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);  // CLI11 consumes from the back
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    c.show_help = true;
    c.help_text = app.help();
    return c;
  } catch (const CLI::ParseError& e) {
    throw UsageError(c.name + ": " + e.what());
  }
  try {
    validate(c, app);
  } catch (const UsageError& e) {
    throw UsageError(c.name + ": " + e.what());
  }
  return c;
}

int run(const Command& c, std::ostream& out, std::ostream& err) {
  if (c.show_help) {
    out << c.help_text;
    return kExitOk;
  }
  try {
    if (c.name == "lyap") return run_lyap(c, out);
    if (c.name == "basins") return run_basins(c, out);
    if (c.name == "intermingle") return run_intermingle(c, out);
    if (c.name == "separator") return run_separator(c, out);
    if (c.name == "histogram") return run_histogram(c, out);
    if (c.name == "jacobian-check") return run_jacobian(c, out);
    if (c.name == "walk") return run_walk(c, out);
    if (c.name == "arcsine") return run_arcsine(c, out);
    if (c.name == "equidist") return run_equidist(c, out);
    if (c.name == "backward") return run_backward(c, out);
    if (c.name == "selftest") return run_selftest_cmd(c, out);
  } catch (const std::exception& e) {
    err << c.name << ": error: " << e.what() << '\n';
    return kExitFailure;
  }
  err << "skewlab: unknown subcommand '" << c.name << "'\n";
  return kExitUsage;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Command c;
  try {
    c = parse(args);
  } catch (const UsageError& e) {
    err << "skewlab: " << e.what() << '\n';
    return kExitUsage;
  }
  return run(c, out, err);
}

}  // namespace skewlab::cli
