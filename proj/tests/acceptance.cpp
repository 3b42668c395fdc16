// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "randset/analytics.hpp"
#include "randset/experiments.hpp"
#include "randset/geomcore.hpp"
#include "randset/models.hpp"
#include "randset/parallel.hpp"
#include "randset/ppp.hpp"
#include "randset/rng.hpp"
#include "randset/summary.hpp"

using namespace randset;
using std::numbers::pi;

namespace {

constexpr std::uint64_t kSeed = 20240917;

// Tolerances and budgets.
constexpr double kVol2RelTol = 0.01;
constexpr double kVol3RelTol = 0.02;
constexpr double kSigmas = 3.0;
constexpr double kKsMax = 0.01;
constexpr double kKsPMin = 0.01;
constexpr double kGSumTol = 1e-9;
constexpr double kClosedFormTol = 1e-12;
constexpr double kHalfspaceRelTol = 0.05;
constexpr double kCroftonRelTol = 0.05;
constexpr double kDiagnosticMax = 0.01;
constexpr double kContainmentMin = 0.95;
constexpr double kWedgeSlack = 1.05;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [x]");
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

RngStream stream(const char* tag, std::uint64_t i) { return RngStream(kSeed, derive_stream(tag, 0, i)); }

const RealMap F2 = [](double r) { return lune_fraction(2, r); };

// (lambda, metric) -> record for aggregate rows.
std::map<std::pair<double, std::string>, ExperimentRecord> aggregates(const std::string& name) {
  std::map<std::pair<double, std::string>, ExperimentRecord> out;
  for (auto& r : run_experiment(default_config(name)))
    if (r.replicate < 0) out[{r.lambda, r.metric}] = r;
  return out;
}

Outcome ac1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double l = 1e4;
  const double q = l * l * expected_volume_quadrature(2, l, F2);
  const double quad_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(std::abs(q / (pi / 2) - 1) < kVol2RelTol, fmt("lambda^2 E|I| = %.6f vs pi/2", q));
  o.require(quad_s < 1.0, fmt("quadrature %.3fs < 1s", quad_s));

  const auto t1 = std::chrono::steady_clock::now();
  const double lam = 200.0;
  const auto radii = map_replicates(100000, [&](std::size_t i) {
    RngStream rng = stream("ac1", i);
    return sample_model_radius(2, lam, rho_measure(2), BallShape{}, rng);
  });
  const Estimate mc = radius_moment_volume(2, radii);
  const double ref = expected_volume_quadrature(2, lam, F2);
  const double mc_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
  o.require(std::abs(mc.value - ref) < kSigmas * mc.std_error,
            fmt("MC %.6g +- %.2g vs quadrature %.6g", mc.value, mc.std_error, ref));
  o.require(mc_s < 120.0, fmt("MC %.1fs < 120s", mc_s));
  return o;
}

Outcome ac2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double l = 1e4;
  const double q = l * l * l * expected_volume_quadrature(3, l, [](double r) { return lune_fraction(3, r); });
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double target = 8.0 / (pi * pi);
  o.require(std::abs(q / target - 1) < kVol3RelTol, fmt("lambda^3 E|I| = %.6f vs %.6f", q, target));
  o.require(std::abs(asymptotic_volume_constant(3) - target) < 1e-12, "closed-form constant");
  o.require(s < 1.0, fmt("%.3fs < 1s", s));
  return o;
}

Outcome ac3() {
  Outcome o;
  const double lam = 200.0;
  const std::size_t n = 100000;
  const double scale = lam * pi;
  const auto process = map_replicates(n, [&](std::size_t i) {
    RngStream rng = stream("ac3-process", i);
    return scale * F2(sample_model_radius(2, lam, rho_measure(2), BallShape{}, rng));
  });
  const RadiusLaw law(2, lam, F2);
  const auto exact = map_replicates(n, [&](std::size_t i) {
    RngStream rng = stream("ac3-exact", i);
    return scale * F2(law.sample(rng));
  });
  const double D = ks_statistic(process, [](double z) { return 1.0 - std::exp(-z); });
  const double p = ks_two_sample_pvalue(exact, process);
  o.require(D < kKsMax, fmt("KS(process, Exp(1)) = %.5f < 0.01", D));
  o.require(p > kKsPMin, fmt("two-sample p = %.3f > 0.01", p));
  return o;
}

Outcome ac4() {
  Outcome o;
  const double lam = 5.0;
  const RadiusLaw law(2, lam, F2);
  const double zmax = law.scale() * law.F_at_one();
  const std::size_t n = 1000000;
  const auto r = map_replicates(n, [&](std::size_t i) {
    RngStream rng = stream("ac4", i);
    return law.sample(rng);
  });
  std::size_t exceed = 0, atoms = 0;
  for (double v : r) {
    exceed += law.scale() * law.F(v) > zmax;
    atoms += v == 1.0;
  }
  const double p = std::exp(-zmax);
  const double freq = static_cast<double>(atoms) / n;
  const double se = std::sqrt(p * (1 - p) / n);
  o.require(exceed == 0, fmt("%.0f draws above lambda omega F(1)", static_cast<double>(exceed)));
  o.require(std::abs(freq - p) < kSigmas * se, fmt("atom frequency %.3g vs %.3g (se %.2g)", freq, p, se));
  return o;
}

Outcome ac5() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int d = 2; d <= 6; ++d)
    for (int k = 1; k <= 9; ++k) worst = std::max(worst, std::abs(g_sum(d, k / 10.0) - g_quadrature(d, k / 10.0)));
  double worst2 = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double r = k / 100.0;
    worst2 = std::max(worst2, std::abs(g_sum(2, r) - (2 * r / pi - r * r / 4)));
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(worst < kGSumTol, fmt("max |sum - quadrature| = %.2e", worst));
  o.require(worst2 < kClosedFormTol, fmt("max |sum - 2r/pi + r^2/4| = %.2e", worst2));
  o.require(s < 5.0, fmt("%.2fs < 5s", s));
  return o;
}

Outcome ac6() {
  Outcome o;
  const double lam = 1000.0;
  const auto q = map_replicates(10000, [&](std::size_t i) {
    RngStream rng = stream("ac6", i);
    return sample_model_radius(2, lam, rho_measure(2), HalfSpaceShape{}, rng);
  });
  const Estimate v = radius_moment_volume(2, q);
  const double scaled = lam * v.value;
  const double target = 4.0 / pi;
  const double quad = lam * expected_volume_quadrature(2, lam, [](double r) { return r * r / 4; });
  o.require(std::abs(scaled / target - 1) < kHalfspaceRelTol,
            fmt("lambda E|I| = %.4f +- %.4f vs 4/pi = %.4f", scaled, lam * v.std_error, target));
  o.detail += fmt("; quadrature of the exact law gives %.4f", quad);
  return o;
}

Outcome ac7() {
  Outcome o;
  const auto a = aggregates("crofton");
  const auto g = goudsmit_constants(2);
  const auto get = [&](const char* m) { return a.at({1.0, m}); };
  const double z = get("zero_cell_mean").value;
  const double ratio = get("moment_ratio").value;
  const auto seg = get("segment_crossings_unit_intensity");
  o.require(get("unbounded_cells").value == 0.0, "no unbounded cells");
  o.require(std::abs(z / g.zero_cell_mean - 1) < kCroftonRelTol,
            fmt("zero-cell mean %.3f vs pi^3/2 = %.3f", z, g.zero_cell_mean));
  o.require(std::abs(ratio / g.moment_ratio - 1) < kCroftonRelTol,
            fmt("moment ratio %.3f vs pi^2/2 = %.3f", ratio, g.moment_ratio));
  o.require(std::abs(seg.value - 2.0) < kSigmas * seg.std_error,
            fmt("unit-segment crossings %.4f +- %.4f vs 2", seg.value, seg.std_error));
  return o;
}

Outcome ac8() {
  Outcome o;
  const auto a = aggregates("coupling");
  const double lambdas[3] = {1000, 3000, 10000};
  double prev = 1e300;
  for (double l : lambdas) {
    const double m = a.at({l, "median_hausdorff_scaled"}).value;
    const double diag = a.at({l, "diagnostic_rate"}).value;
    o.require(m < prev, fmt("lambda %.0f: median %.5f", l, m));
    o.require(diag < kDiagnosticMax, fmt("diagnostic %.4f", diag));
    prev = m;
  }
  const double c = a.at({10000.0, "shell_containment_rate"}).value;
  o.require(c >= kContainmentMin, fmt("containment at 1e4: %.3f", c));
  return o;
}

Outcome ac9() {
  Outcome o;
  const auto a = aggregates("warmup-1d");
  const auto mean = a.at({100.0, "mean_scaled_length"});
  const auto var = a.at({100.0, "var_scaled_length"});
  const auto corr = a.at({100.0, "endpoint_correlation"});
  o.require(std::abs(mean.value - 2) < kSigmas * mean.std_error, fmt("mean %.4f +- %.4f", mean.value, mean.std_error));
  o.require(std::abs(var.value - 2) < kSigmas * var.std_error, fmt("variance %.4f +- %.4f", var.value, var.std_error));
  o.require(std::abs(corr.value) < kSigmas * corr.std_error, fmt("correlation %.4f +- %.4f", corr.value, corr.std_error));
  return o;
}

Outcome ac10() {
  Outcome o;
  const double lam = 1e4, eps = 1e-3;
  const double targets[3] = {2 * pi * lam * eps, 2 * lam * eps, 4 * pi * lam * eps};
  const MeetingModel models[3] = {MeetingModel::Boolean, MeetingModel::HyperplaneTess, MeetingModel::SphereTess};
  const char* names[3] = {"boolean", "hyperplane", "sphere"};
  for (int m = 0; m < 3; ++m) {
    const auto c = map_replicates(10000, [&](std::size_t i) {
      RngStream rng = stream(names[m], i);
      return static_cast<double>(meeting_count(models[m], 2, lam, eps, rng));
    });
    const Estimate e = mean_estimate(c);
    o.require(std::abs(e.value - targets[m]) < kSigmas * e.std_error,
              std::string(names[m]) + fmt(" %.3f vs %.3f (se %.3f)", e.value, targets[m], e.std_error));
  }
  return o;
}

Outcome ac11() {
  Outcome o;
  int coupon_bad = 0, coupon_n = 0;
  const std::vector<std::vector<double>> laws = {
      std::vector<double>(6, 1.0 / 6), {0.1, 0.15, 0.15, 0.2, 0.2, 0.2}, {0.05, 0.05, 0.1, 0.2, 0.3, 0.3}};
  for (std::size_t k = 0; k < laws.size(); ++k) {
    const double a_star = *std::min_element(laws[k].begin(), laws[k].end());
    for (int t : {10, 20, 40, 80}) {
      RngStream rng = stream("ac11", k * 100 + static_cast<std::uint64_t>(t));
      const Estimate e = coupon_empirical(laws[k], t, 20000, rng);
      const double bound = coupon_bound(6, a_star, std::exp(static_cast<double>(t)));
      coupon_bad += !(e.value <= bound + kSigmas * e.std_error);
      ++coupon_n;
    }
  }
  o.require(coupon_bad == 0, fmt("coupon: %.0f of %.0f above bound", coupon_bad, coupon_n));

  int tv_bad = 0;
  double worst_ratio = 0.0;
  for (double mu : {0.5, 5.0, 50.0, 500.0})
    for (double delta : {0.0, 0.01, 0.1, 1.0, 5.0}) {
      const double tv = poisson_tv_distance(mu, delta);
      tv_bad += !(tv <= delta);
      if (delta > 0) worst_ratio = std::max(worst_ratio, tv / delta);
    }
  o.require(tv_bad == 0, fmt("Poisson TV <= delta (max TV/delta %.3f)", worst_ratio));

  int cap_bad = 0;
  for (int k = 1; k <= 1000; ++k) cap_bad += !cap_hyp_within_bound(0.5 * k / 1000.0);
  o.require(cap_bad == 0, "cap distance <= delta^2");

  int wedge_bad = 0;
  double worst = 0.0;
  for (int d = 1; d <= 4; ++d)
    for (int k = 1; k <= 300; ++k) {
      const double r = 0.3 * k / 300.0;
      const double gap = wedge_volume(d, r) - unit_ball_volume(d) * lune_fraction(d, r);
      const double bound = wedge_lune_gap_bound(d, r);
      wedge_bad += !(gap >= -1e-14 && gap <= kWedgeSlack * bound + 1e-14);
      if (bound > 0) worst = std::max(worst, gap / bound);
    }
  o.require(wedge_bad == 0, fmt("wedge/lune gap within bound (max gap/bound %.3f)", worst));
  return o;
}

}  // namespace

int main() {
  configure_threads_from_env();
  struct Criterion {
    const char* id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {"AC1", "volume constant d=2", 180, ac1},
      {"AC2", "volume constant d=3", 1, ac2},
      {"AC3", "exponential radius limit", 180, ac3},
      {"AC4", "truncated exact law", 60, ac4},
      {"AC5", "tangent-hyperplane lune sum", 5, ac5},
      {"AC6", "uniform centers with half-spaces", 120, ac6},
      {"AC7", "line tessellation cell moments", 300, ac7},
      {"AC8", "coupling trend", 600, ac8},
      {"AC9", "one-dimensional warm-up", 30, ac9},
      {"AC10", "meeting-count constants", 60, ac10},
      {"AC11", "bound suite", 60, ac11},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s %-5s %-34s %7.2fs/%gs  %s\n", pass ? "PASS" : "FAIL", c.id, c.name, s, c.budget_s,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, all.size());
  return failed == 0 ? 0 : 1;
}
