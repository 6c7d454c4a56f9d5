#include "selftest.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>

#include "skewlab/skewlab.hpp"

namespace skewlab::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Context {
  unsigned threads;
  fs::path dir;
  std::uint64_t seed;
  bool enforce_runtime;

  std::uint64_t seed_for(int id) const { return seed + static_cast<std::uint64_t>(id); }
};

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void write_artifact(const Context& ctx, const std::string& name, const std::function<void(std::ostream&)>& body) {
  auto out = open_output((ctx.dir / name).string());
  body(out);
  out.flush();
  check_stream(out, name);
}

class Detail {
 public:
  template <typename T>
  Detail& operator<<(const T& v) {
    os_ << v;
    return *this;
  }
  Detail& num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    os_ << s.str();
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

// Seconds spent inside a criterion versus its budget.
bool within(const Context& ctx, double seconds, double budget, Detail& d, const char* what) {
  d << "; " << what << ' ';
  d.num(seconds) << " s";
  if (!ctx.enforce_runtime || seconds <= budget) return true;
  d << " (budget ";
  d.num(budget) << " s exceeded)";
  return false;
}

const std::vector<double> kSignLawEps{0.1, 0.3, 0.5, 0.7, 0.9};

CriterionResult exponent_oracle(const Context& ctx) {
  const auto t0 = Clock::now();
  const double eps = 0.5;
  const double closed = std::log((1.0 + std::sqrt(1.0 - eps * eps)) / 2.0);
  const auto kan = exponent_report(CylinderSystem(3, FiberFamily::kan(eps)), 4096);
  const auto inv = exponent_report(CylinderSystem(3, FiberFamily::inverse_kan(eps)), 4096);
  const double err = std::max({std::fabs(kan.lyap0 - closed), std::fabs(kan.lyap1 - closed),
                               std::fabs(inv.lyap0 + closed), std::fabs(inv.lyap1 + closed)});
  bool ok = err < 1e-6;

  struct Row {
    const char* family;
    double eps;
    ExponentReport r;
  };
  std::vector<Row> rows;
  bool signs = true;
  for (double e : kSignLawEps) {
    const auto k = exponent_report(CylinderSystem(3, FiberFamily::kan(e)), 4096);
    const auto i = exponent_report(CylinderSystem(3, FiberFamily::inverse_kan(e)), 4096);
    signs = signs && k.lyap0 < 0.0 && k.lyap1 < 0.0 && k.sum_sign == -1;
    signs = signs && i.lyap0 > 0.0 && i.lyap1 > 0.0 && i.sum_sign == 1;
    rows.push_back({"kan", e, k});
    rows.push_back({"inverse-kan", e, i});
  }
  ok = ok && signs;
  const double secs = since(t0);

  write_artifact(ctx, "lyap.csv", [&](std::ostream& out) {
    out << "family,epsilon,lyap0,lyap1,sum_sign,closed_form\n";
    for (const auto& row : rows) {
      const double c = std::log((1.0 + std::sqrt(1.0 - row.eps * row.eps)) / 2.0);
      out << row.family << ',' << format_double(row.eps) << ',' << format_double(row.r.lyap0) << ','
          << format_double(row.r.lyap1) << ',' << row.r.sum_sign << ','
          << format_double(row.family[0] == 'k' ? c : -c) << '\n';
    }
  });

  Detail d;
  d << "kan lyap0=";
  d.num(kan.lyap0) << " lyap1=";
  d.num(kan.lyap1) << " closed=";
  d.num(closed) << " max_err=";
  d.num(err) << "; sign law " << (signs ? "holds" : "broken") << " for eps 0.1..0.9";
  ok = within(ctx, secs, 0.1, d, "time") && ok;
  return {1, "exponent oracle", ok, d.str(), secs};
}

CriterionResult schwarzian_identities(const Context& ctx) {
  const auto t0 = Clock::now();
  double comp_err = 0.0;
  for (double a : {-0.5, -0.3, 0.3, 0.5}) {
    for (double b : {-0.5, -0.3, 0.3, 0.5}) {
      for (int i = 1; i <= 9; ++i) {
        const double y = i / 10.0;
        const double num = schwarzian_numeric([&](double v) { return kan::eval(a, kan::eval(b, v)); }, y);
        const double gp = kan::derivative(b, y);
        const double law = gp * gp * kan::schwarzian(a, kan::eval(b, y)) + kan::schwarzian(b, y);
        comp_err = std::max(comp_err, std::fabs(num - law));
      }
    }
  }

  Rng rng(ctx.seed_for(2));
  const auto kan = FiberFamily::kan(0.5);
  const auto inv = FiberFamily::inverse_kan(0.5);
  std::size_t sign_bad = 0;
  double moebius_max = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    if (kan.kan_parameter(x) != 0.0) {
      sign_bad += !(schwarzian_analytic(kan, x, y) < 0.0);
      sign_bad += !(schwarzian_analytic(inv, x, y) > 0.0);
    }
    // h = 5e-4 balances stencil truncation (h^2) against rounding (1/h^3) for |c| <= 1.
    const MoebiusMap m{rng.uniform(-1.0, 1.0)};
    const double ym = rng.uniform(0.1, 0.9);
    moebius_max = std::max(moebius_max,
                           std::fabs(schwarzian_numeric([&](double v) { return moebius_eval(m, v); }, ym, 5e-4)));
  }

  std::size_t product_bad = 0;
  for (int i = 0; i < 100; ++i) {
    const double x = i / 100.0 + 0.003;
    const double a = kan.kan_parameter(x);
    const double prod = fiber_derivative(kan, x, 0.0) * fiber_derivative(kan, x, 1.0);
    product_bad += !(std::fabs(prod - (1.0 - a * a)) <= 1e-15 && prod < 1.0);
  }
  const double secs = since(t0);

  bool ok = comp_err < 1e-3 && sign_bad == 0 && moebius_max < 1e-4 && product_bad == 0;
  Detail d;
  d << "composition max_err=";
  d.num(comp_err) << "; sign violations=" << sign_bad << "; moebius max|S|=";
  d.num(moebius_max) << "; boundary product violations=" << product_bad;
  ok = within(ctx, secs, 1.0, d, "time") && ok;
  return {2, "schwarzian identities", ok, d.str(), secs};
}

CriterionResult cross_ratio_monotonicity(const Context& ctx) {
  const auto t0 = Clock::now();
  Rng rng(ctx.seed_for(3));
  const auto kan = FiberFamily::kan(0.5);
  const auto inv = FiberFamily::inverse_kan(0.5);
  std::size_t checked = 0, kan_bad = 0, inv_bad = 0;
  double moebius_err = 0.0;
  while (checked < 1000) {
    std::vector<double> q{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    std::sort(q.begin(), q.end());
    const double x = rng.uniform();
    const double c = rng.uniform(-1.0, 1.0);
    // a = 0 fibers are the identity; near-coincident points lose the strict order to rounding.
    if (std::fabs(cos_2pi(x)) < 1e-2) continue;
    if (q[1] - q[0] < 1e-3 || q[2] - q[1] < 1e-3 || q[3] - q[2] < 1e-3) continue;
    const double r = cross_ratio(q[0], q[1], q[2], q[3]);
    auto image = [&](auto&& f) { return cross_ratio(f(q[0]), f(q[1]), f(q[2]), f(q[3])); };
    kan_bad += !(image([&](double v) { return eval_fiber(kan, x, v); }) > r);
    inv_bad += !(image([&](double v) { return eval_fiber(inv, x, v); }) < r);
    const double rm = image([&](double v) { return moebius_eval(MoebiusMap{c}, v); });
    moebius_err = std::max(moebius_err, std::fabs(rm / r - 1.0));
    ++checked;
  }
  const double secs = since(t0);
  bool ok = kan_bad == 0 && inv_bad == 0 && moebius_err < 1e-12;
  Detail d;
  d << checked << " quadruples; kan non-increase=" << kan_bad << "; inverse-kan non-decrease=" << inv_bad
    << "; moebius max rel err=";
  d.num(moebius_err);
  ok = within(ctx, secs, 1.0, d, "time") && ok;
  return {3, "cross-ratio monotonicity", ok, d.str(), secs};
}

CriterionResult jacobian_sum(const Context& ctx) {
  const auto t0 = Clock::now();
  const CylinderSystem sys(3, FiberFamily::inverse_kan(0.5));
  Rng rng(ctx.seed_for(4));
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    worst = std::max(worst, std::fabs(jacobian_branch_sum(sys, {x, y}) - 1.0));
  }
  const double secs = since(t0);
  bool ok = worst < 1e-12;
  Detail d;
  d << "1000 points, max |sum - 1|=";
  d.num(worst);
  ok = within(ctx, secs, 0.1, d, "time") && ok;
  return {4, "jacobian branch sum", ok, d.str(), secs};
}

CriterionResult intermingled_basins(const Context& ctx) {
  const CylinderSystem sys(3, FiberFamily::kan(0.5));
  const auto hyp = check_kan_hypothesis(sys, 0.5, 0.0, 0.1);

  const auto t_raster = Clock::now();
  const auto raster = rasterize(sys, 512, 512, 5000, 1e-6, ctx.threads);
  const double raster_secs = since(t_raster);
  const auto frac = measure_fractions(raster);
  write_artifact(ctx, "basins.ppm", [&](std::ostream& out) { write_ppm(out, raster); });

  const auto t_probe = Clock::now();
  ProbeParams p;
  p.seed = ctx.seed_for(5);
  const auto probe = intermingle_probe(sys, p, ctx.threads);
  const double probe_secs = since(t_probe);
  write_artifact(ctx, "intermingle.csv", [&](std::ostream& out) { write_intermingle_csv(out, probe); });

  bool ok = hyp.pass && frac.undecided < 0.02 && std::fabs(frac.basin0 - frac.basin1) < 0.02 &&
            probe.boxes_both >= 90;
  Detail d;
  d << "hypothesis r=0.1 " << (hyp.pass ? "holds" : "fails") << " (" << hyp.violations.size()
    << " violations); raster frac0=";
  d.num(frac.basin0) << " frac1=";
  d.num(frac.basin1) << " undecided=";
  d.num(frac.undecided) << "; probe both=" << probe.boxes_both << "/" << probe.boxes_total;
  ok = within(ctx, raster_secs, 30.0, d, "raster") && ok;
  ok = within(ctx, probe_secs, 10.0, d, "probe") && ok;
  return {5, "intermingled basins", ok, d.str(), raster_secs + probe_secs};
}

CriterionResult backward_orbit(const Context& ctx) {
  const auto t0 = Clock::now();
  const CylinderSystem sys(3, FiberFamily::kan(0.5));
  const auto path = backward_orbit_toward(sys, {0.1, 0.5}, 0.5, 200);
  const double secs = since(t0);
  const auto end = path.back();
  const double dist = circle_distance(end.x, 0.5);
  bool ok = dist < 1e-6 && end.y > 0.999;
  Detail d;
  d << "end x=";
  d.num(end.x) << " y=";
  d.num(end.y) << " |x - 0.5|=";
  d.num(dist);
  ok = within(ctx, secs, 0.01, d, "time") && ok;
  return {6, "backward orbit", ok, d.str(), secs};
}

CriterionResult separator(const Context& ctx) {
  const auto t0 = Clock::now();
  const CylinderSystem sys(3, FiberFamily::kan(0.5));
  constexpr std::size_t kAngles = 200;
  constexpr std::size_t kMaxIter = 5000;
  constexpr double kDelta = 1e-6;
  constexpr double kTol = 1e-5;
  Rng rng(ctx.seed_for(7));
  std::vector<double> xs(kAngles);
  for (auto& x : xs) x = rng.uniform();
  std::vector<SeparatorSample> at_x(kAngles), at_kx(kAngles);
  parallel_for(kAngles, ctx.threads, [&](std::size_t i) {
    at_x[i] = estimate_separator(sys, xs[i], kMaxIter, kDelta, kTol);
    at_kx[i] = estimate_separator(sys, times_k_mod1(3, xs[i]), kMaxIter, kDelta, kTol);
  });
  const auto s0 = estimate_separator(sys, 0.0, kMaxIter, kDelta, kTol);
  const auto s_half = estimate_separator(sys, 0.5, kMaxIter, kDelta, kTol);

  std::size_t decided = 0, good = 0;
  std::vector<double> residual(kAngles, std::nan(""));
  for (std::size_t i = 0; i < kAngles; ++i) {
    if (!at_x[i].decided || !at_kx[i].decided) continue;
    ++decided;
    residual[i] = std::fabs(at_kx[i].sigma - eval_fiber(sys.family(), xs[i], at_x[i].sigma));
    good += residual[i] < 1e-2;
  }
  const double secs = since(t0);

  write_artifact(ctx, "separator.csv", [&](std::ostream& out) {
    out << "x,sigma,bracket,decided,kx,sigma_kx,residual\n";
    for (std::size_t i = 0; i < kAngles; ++i) {
      out << format_double(xs[i]) << ',' << format_double(at_x[i].sigma) << ',' << format_double(at_x[i].bracket)
          << ',' << (at_x[i].decided ? 1 : 0) << ',' << format_double(at_kx[i].x) << ','
          << format_double(at_kx[i].sigma) << ',' << (std::isnan(residual[i]) ? "" : format_double(residual[i]))
          << '\n';
    }
  });

  // A handful of decided angles would make the 90% rule vacuous.
  bool ok = decided >= kAngles / 2 && static_cast<double>(good) >= 0.9 * static_cast<double>(decided) &&
            s0.sigma < 0.01 && s_half.sigma > 0.99;
  Detail d;
  d << good << "/" << decided << " decided angles satisfy the functional equation; sigma(0)=";
  d.num(s0.sigma) << " sigma(0.5)=";
  d.num(s_half.sigma);
  ok = within(ctx, secs, 30.0, d, "time") && ok;
  return {7, "separator", ok, d.str(), secs};
}

CriterionResult asymptotic_measure(const Context& ctx) {
  const auto t0 = Clock::now();
  const CylinderSystem inv(3, FiberFamily::inverse_kan(0.5));
  const CylinderSystem kan(3, FiberFamily::kan(0.5));
  const CylPoint start{0.2718281828459045, 0.3141592653589793};
  constexpr std::size_t kN = 1000000;
  const std::uint64_t s = ctx.seed_for(8);

  Histogram2D inv_hist(16, 16), kan_hist(16, 10);
  std::array<double, 3> avg{};
  const std::array<TestFunction, 3> chis{TestFunction::Y, TestFunction::YSquared, TestFunction::CosX};
  parallel_for(5, ctx.threads, [&](std::size_t task) {
    if (task == 0) inv_hist = orbit_histogram(inv, start, kN, 16, 16, 1000, derive_seed(s, 0));
    if (task == 1) kan_hist = orbit_histogram(kan, start, kN, 16, 10, 1000, derive_seed(s, 1));
    if (task >= 2) avg[task - 2] = birkhoff_average(inv, chis[task - 2], start, kN, 1000, derive_seed(s, task));
  });
  const auto uni = uniformity_stats(inv_hist);
  const double interior = kan_hist.mass_in_rows(0.1, 0.9);
  const double secs = since(t0);

  write_artifact(ctx, "histogram.csv", [&](std::ostream& out) { write_histogram_csv(out, inv_hist); });
  write_artifact(ctx, "uniformity.csv", [&](std::ostream& out) { write_uniformity_csv(out, uni); });

  bool ok = uni.max_rel_dev < 0.1 && std::fabs(avg[0] - 0.5) < 0.01 && std::fabs(avg[1] - 1.0 / 3.0) < 0.01 &&
            std::fabs(avg[2]) < 0.01 && interior < 0.05;
  Detail d;
  d << "inverse-kan max_rel_dev=";
  d.num(uni.max_rel_dev) << "; <Y>=";
  d.num(avg[0]) << " <Y^2>=";
  d.num(avg[1]) << " <cos 2pi x>=";
  d.num(avg[2]) << "; kan interior mass=";
  d.num(interior);
  ok = within(ctx, secs, 10.0, d, "time") && ok;
  return {8, "asymptotic measure", ok, d.str(), secs};
}

CriterionResult random_walk_regime(const Context& ctx) {
  const auto t0 = Clock::now();
  const auto profile = DisplacementProfile::step({1.0, -1.0});
  constexpr std::size_t kN = 1000000;
  const std::uint64_t s = ctx.seed_for(9);

  const auto single = occupation_ratios(simulate_walk(profile, 0.0, kN, derive_seed(s, 0)), 1.0);
  const double b_single = single.b_ratio(kN);
  write_artifact(ctx, "walk_ratios.csv", [&](std::ostream& out) { write_occupation_csv(out, single, 1000); });

  std::vector<double> b(100);
  const std::uint64_t median_seed = derive_seed(s, 1);
  parallel_for(b.size(), ctx.threads, [&](std::size_t i) {
    b[i] = occupation_ratios(simulate_walk(profile, 0.0, kN, derive_seed(median_seed, i)), 1.0).b_ratio(kN);
  });
  // Even count: the median is the mean of the two central order statistics.
  std::sort(b.begin(), b.end());
  const double b_median = 0.5 * (b[49] + b[50]);

  const auto rows = arcsine_ensemble(profile, 10000, 2000, {0.25, 0.5}, derive_seed(s, 2), ctx.threads);
  write_artifact(ctx, "arcsine.csv", [&](std::ostream& out) { write_arcsine_csv(out, rows); });

  constexpr std::size_t kWild = 20;
  std::vector<RatioRange> ranges(kWild);
  const std::uint64_t wild_seed = derive_seed(s, 3);
  parallel_for(kWild, ctx.threads, [&](std::size_t i) {
    ranges[i] = a_ratio_range(occupation_ratios(simulate_walk(profile, 0.0, kN, derive_seed(wild_seed, i)), 0.0),
                              1000);
  });
  std::size_t sweeps = 0;
  for (const auto& r : ranges) sweeps += r.min <= 0.05 && r.max >= 0.95;
  const double secs = since(t0);

  bool ok = b_single < 0.01 && b_median < 0.005 && std::fabs(rows[1].empirical - 0.5) <= 0.03 &&
            std::fabs(rows[0].empirical - 1.0 / 3.0) <= 0.04 && sweeps >= 1;
  Detail d;
  d << "b_n/n=";
  d.num(b_single) << " median=";
  d.num(b_median) << "; P(a/n>0.5)=";
  d.num(rows[1].empirical) << " P(a/n>0.75)=";
  d.num(rows[0].empirical) << "; wild walks " << sweeps << "/" << kWild;
  ok = within(ctx, secs, 60.0, d, "time") && ok;
  return {9, "random-walk regime", ok, d.str(), secs};
}

CriterionResult equidistribution(const Context& ctx) {
  const auto t0 = Clock::now();
  const auto walk = simulate_walk(DisplacementProfile::step({1.0, -1.0}), 0.0, 1000000, derive_seed(ctx.seed_for(10), 0));
  const std::vector<Rational> values{Rational::make(1, 1), Rational::make(-1, 1)};
  const auto pi_mod = Modulus::irrational(std::numbers::pi);
  const auto two_mod = Modulus::rational(Rational::make(2, 1));
  const auto pi_rep = circle_equidistribution(walk, pi_mod.approx, 100);
  const auto two_rep = circle_equidistribution(walk, two_mod.approx, 100);
  const bool pi_check = cyclic_support_check(values, pi_mod);
  const bool two_check = cyclic_support_check(values, two_mod);
  const double secs = since(t0);

  write_artifact(ctx, "equidist.csv", [&](std::ostream& out) {
    out << "modulus,irrational,cyclic_check,cdf_deviation\n";
    out << "pi,1," << (pi_check ? 1 : 0) << ',' << format_double(pi_rep.cdf_deviation) << '\n';
    out << "2,0," << (two_check ? 1 : 0) << ',' << format_double(two_rep.cdf_deviation) << '\n';
  });

  bool ok = pi_rep.cdf_deviation < 0.01 && !pi_check && two_rep.cdf_deviation > 0.2 && two_check;
  Detail d;
  d << "L=pi deviation=";
  d.num(pi_rep.cdf_deviation) << " check=" << (pi_check ? "true" : "false") << "; L=2 deviation=";
  d.num(two_rep.cdf_deviation) << " check=" << (two_check ? "true" : "false");
  ok = within(ctx, secs, 5.0, d, "time") && ok;
  return {10, "equidistribution dichotomy", ok, d.str(), secs};
}

using Criterion = CriterionResult (*)(const Context&);
const std::vector<std::pair<const char*, Criterion>> kCriteria{
    {"exponent oracle", exponent_oracle},
    {"schwarzian identities", schwarzian_identities},
    {"cross-ratio monotonicity", cross_ratio_monotonicity},
    {"jacobian branch sum", jacobian_sum},
    {"intermingled basins", intermingled_basins},
    {"backward orbit", backward_orbit},
    {"separator", separator},
    {"asymptotic measure", asymptotic_measure},
    {"random-walk regime", random_walk_regime},
    {"equidistribution dichotomy", equidistribution},
};

void report(std::ostream& log, const CriterionResult& r) {
  log << "selftest: " << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << '\n';
  log.flush();
}

std::vector<CriterionResult> run_criteria(const Context& ctx, std::ostream* log) {
  fs::create_directories(ctx.dir);
  std::vector<CriterionResult> results;
  for (std::size_t i = 0; i < kCriteria.size(); ++i) {
    CriterionResult r;
    try {
      r = kCriteria[i].second(ctx);
    } catch (const std::exception& e) {
      r = {static_cast<int>(i + 1), kCriteria[i].first, false, std::string("exception: ") + e.what(), 0.0};
    }
    if (log) report(*log, r);
    results.push_back(std::move(r));
  }
  return results;
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  return std::equal(std::istreambuf_iterator<char>(fa), std::istreambuf_iterator<char>(),
                    std::istreambuf_iterator<char>(fb), std::istreambuf_iterator<char>());
}

}  // namespace

const std::vector<std::string>& selftest_artifacts() {
  static const std::vector<std::string> names{"lyap.csv",       "basins.ppm",     "intermingle.csv",
                                              "separator.csv",  "histogram.csv",  "uniformity.csv",
                                              "walk_ratios.csv", "arcsine.csv",   "equidist.csv"};
  return names;
}

std::vector<CriterionResult> run_selftest(const SelftestOptions& opts, std::ostream& log) {
  const unsigned threads = opts.threads == 0 ? default_threads() : opts.threads;
  const Context main{threads, opts.out_dir, opts.seed, opts.enforce_runtime};
  auto results = run_criteria(main, &log);

  if (opts.check_determinism) {
    const auto t0 = Clock::now();
    std::size_t mismatches = 0;
    std::string first_mismatch;
    for (unsigned t : {1u, 8u}) {
      const Context rerun{t, opts.out_dir / ("threads" + std::to_string(t)), opts.seed, false};
      run_criteria(rerun, nullptr);
      for (const auto& name : selftest_artifacts()) {
        if (same_bytes(main.dir / name, rerun.dir / name)) continue;
        ++mismatches;
        if (first_mismatch.empty()) first_mismatch = (rerun.dir / name).string();
      }
    }
    Detail d;
    d << selftest_artifacts().size() << " artifacts compared against reruns with 1 and 8 threads; mismatches="
      << mismatches;
    if (!first_mismatch.empty()) d << " (first: " << first_mismatch << ")";
    CriterionResult r{11, "determinism", mismatches == 0, d.str(), since(t0)};
    report(log, r);
    results.push_back(std::move(r));
  }

  const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  log << "selftest: " << passed << "/" << results.size() << " criteria passed\n";
  return results;
}

}  // namespace skewlab::cli
