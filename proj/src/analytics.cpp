#include "randset/analytics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <numbers>

#include "randset/error.hpp"
#include "randset/geomcore.hpp"

namespace randset {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;

template <class Fn>
double integrate(Fn&& f, double a, double b, double tol) {
  double error = 0.0;
  const double value = Kronrod::integrate(f, a, b, 20, tol, &error);
  if (!std::isfinite(value)) throw NumericalFailure("quadrature returned a non-finite value");
  return value;
}

double binomial(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace

double f_closed_form_2d(double r) {
  if (!(r >= 0.0 && r <= 2.0)) throw DomainError("f_closed_form_2d: r outside [0, 2]");
  const double h = 0.5 * r;
  return 1.0 - (2.0 * std::acos(h) - r * std::sqrt(1.0 - h * h)) / std::numbers::pi;
}

double g_sum(int d, double r) {
  if (d < 1) throw DomainError("g_sum: dimension must be >= 1");
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("g_sum: r outside [0, 1]");
  if (d == 1) return 0.5 * r;
  const double pref = (d - 1) * unit_ball_volume(d - 1) / (d * unit_ball_volume(d));
  double sum = 0.0;
  double rk = 1.0;
  for (int k = 1; k <= d; ++k) {
    rk *= r;
    const double sign = k % 2 == 1 ? 1.0 : -1.0;
    sum += sign * binomial(d, k) * latitude_integral_gamma(k, d - 2) * rk;
  }
  return pref * sum;
}

double g_quadrature(int d, double r, double tol) {
  if (d < 2) throw DomainError("g_quadrature: d must be >= 2");
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("g_quadrature: r outside [0, 1]");
  // nu(0, s) = (1 - (1 - s)^d) / d, integrated over the half sphere by latitude.
  const double pref = (d - 1) * unit_ball_volume(d - 1) / (d * unit_ball_volume(d));
  auto f = [d, r](double a) {
    const double s = r * std::cos(a);
    return -std::expm1(d * std::log1p(-s)) * std::pow(std::sin(a), d - 2);
  };
  return pref * integrate(f, 0.0, 0.5 * std::numbers::pi, tol);
}

double latitude_integral_quadrature(int k, int m) {
  if (k < 0 || m < 0) throw DomainError("latitude_integral: negative exponent");
  auto f = [k, m](double a) { return std::pow(std::cos(a), k) * std::pow(std::sin(a), m); };
  return integrate(f, 0.0, 0.5 * std::numbers::pi, 1e-15);
}

double latitude_integral_gamma(int k, int m) {
  if (k < 0 || m < 0) throw DomainError("latitude_integral: negative exponent");
  return std::exp(std::lgamma(0.5 * (m + 1)) + std::lgamma(0.5 * (k + 1)) -
                  std::lgamma(0.5 * (k + m + 2))) /
         2.0;
}

Estimate f_generic_mc(const ShapeKind& shape, const RadialMeasure& mu, int d, double r,
                      std::size_t n, RngStream& rng) {
  validate_shape(shape, d);
  if (n == 0) throw DomainError("f_generic_mc: n must be >= 1");
  if (!(r >= 0.0)) throw DomainError("f_generic_mc: negative r");
  std::vector<double> e1(static_cast<std::size_t>(d), 0.0);
  e1[0] = 1.0;
  std::vector<double> c(static_cast<std::size_t>(d));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = mu.inverse_cdf(rng.uniform_open());
    sample_direction(d, rng, c);
    for (double& x : c) x *= p;
    if (shape_exit_time(shape, c, e1) < r) ++hits;
  }
  const double f = static_cast<double>(hits) / static_cast<double>(n);
  return {f, std::sqrt(f * (1.0 - f) / static_cast<double>(n))};
}

double invert_increasing(const RealMap& f, double y, double lo, double hi, double tol) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (!(y >= flo && y <= fhi)) throw DomainError("invert_increasing: y outside [f(lo), f(hi)]");
  if (y == flo) return lo;
  if (y == fhi) return hi;
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      [&](double x) { return f(x) - y; }, lo, hi, flo - y, fhi - y,
      [tol](double u, double v) { return std::abs(v - u) <= tol; }, iters);
  return 0.5 * (a + b);
}

RadiusLaw::RadiusLaw(int d, double lambda, RealMap F)
    : d_(d), lambda_(lambda), F_(std::move(F)) {
  if (d < 1) throw DomainError("RadiusLaw: dimension must be >= 1");
  if (!(lambda >= 0.0)) throw DomainError("RadiusLaw: negative intensity");
  if (!F_) throw DomainError("RadiusLaw: empty F");
  f1_ = F_(1.0);
  scale_ = lambda * unit_ball_volume(d);
}

double RadiusLaw::survival(double r) const {
  if (r <= 0.0) return 1.0;
  if (r >= 1.0) return 0.0;
  return std::exp(-scale_ * F_(r));
}

double RadiusLaw::sample(RngStream& rng) const {
  const double e = rng.exponential();
  if (scale_ == 0.0) return 1.0;
  const double z = e / scale_;
  if (z >= f1_) return 1.0;
  return invert_increasing(F_, z);
}

double sample_radius_exact(int d, double lambda, const RealMap& F, RngStream& rng) {
  return RadiusLaw(d, lambda, F).sample(rng);
}

double expected_volume_quadrature(int d, double lambda, const RealMap& F) {
  if (d < 1) throw DomainError("expected_volume_quadrature: dimension must be >= 1");
  if (!(lambda >= 0.0)) throw DomainError("expected_volume_quadrature: negative intensity");
  const double w = unit_ball_volume(d);
  if (lambda == 0.0) return w;
  const double scale = lambda * w;
  auto f = [&](double r) { return std::pow(r, d - 1) * std::exp(-scale * F(r)); };
  // Beyond r_cut the integrand is below e^{-50} of its peak; integrate the
  // two pieces separately so the adaptive rule resolves the narrow bulk.
  const double f1 = F(1.0);
  const double cut_level = std::min(f1, 50.0 / scale);
  const double r_cut = cut_level >= f1 ? 1.0 : invert_increasing(F, cut_level);
  double total = integrate(f, 0.0, r_cut, 1e-12);
  if (r_cut < 1.0) total += integrate(f, r_cut, 1.0, 1e-12);
  return d * w * total;
}

double asymptotic_volume_constant(int d) {
  if (d < 1) throw DomainError("asymptotic_volume_constant: dimension must be >= 1");
  return std::tgamma(d + 1.0) * unit_ball_volume(d) / std::pow(unit_ball_volume(d - 1), d);
}

GoudsmitConstants goudsmit_constants(int d) {
  if (d < 2) throw DomainError("goudsmit_constants: d must be >= 2");
  const double w = unit_ball_volume(d);
  const double w1 = unit_ball_volume(d - 1);
  const double c = 2.0 * w1 / (d * w);
  const double mean = std::pow(2.0 / c, d) / w;
  const double ratio = std::tgamma(d + 1.0) * w * w / std::pow(2.0, d);
  return {d, c, mean, ratio, ratio * mean};
}

double ks_statistic(std::span<const double> samples, const RealMap& cdf) {
  if (samples.empty()) throw DomainError("ks_statistic: empty sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample_statistic: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.18) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double j = 2.0 * k - 1.0;
      s += std::exp(-j * j * pi2 / (8.0 * x * x));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / x * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

double ks_pvalue(double statistic, double effective_n) {
  if (!(effective_n > 0.0)) throw DomainError("ks_pvalue: effective size must be positive");
  const double sn = std::sqrt(effective_n);
  return kolmogorov_survival((sn + 0.12 + 0.11 / sn) * statistic);
}

double ks_two_sample_pvalue(std::span<const double> a, std::span<const double> b) {
  const double d = ks_two_sample_statistic(a, b);
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  return ks_pvalue(d, na * nb / (na + nb));
}

Estimate radius_moment_volume(int d, std::span<const double> radius_samples) {
  if (d < 1) throw DomainError("radius_moment_volume: dimension must be >= 1");
  if (radius_samples.empty()) throw DomainError("radius_moment_volume: empty sample");
  std::vector<double> p;
  p.reserve(radius_samples.size());
  for (double r : radius_samples) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("radius_moment_volume: radius outside [0, 1]");
    p.push_back(std::pow(r, d));
  }
  const Estimate m = mean_estimate(p);
  const double w = unit_ball_volume(d);
  return {w * m.value, w * m.std_error};
}

double hit_or_miss_volume(int d, double lambda, std::size_t points, RngStream& rng) {
  if (points == 0) throw DomainError("hit_or_miss_volume: points must be >= 1");
  const ProcessSample centers = sample_product_process(d, lambda, rho_measure(d), rng);
  const double w = unit_ball_volume(d);
  const double a = std::min(1.0, 8.0 / (std::max(lambda, 1e-300) * unit_ball_volume(d - 1)));
  const double inner_density = 0.5 / (w * std::pow(a, d));
  const double outer_density = 0.5 / w;
  std::vector<double> x(static_cast<std::size_t>(d));
  std::vector<double> terms(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double radius = rng.uniform() < 0.5 ? a : 1.0;
    sample_direction(d, rng, x);
    const double t = radius * std::pow(rng.uniform(), 1.0 / d);
    for (double& c : x) c *= t;
    bool inside = true;
    for (std::size_t i = 0; i < centers.size() && inside; ++i) {
      const auto c = centers.point(i);
      double s = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) s += (x[j] - c[j]) * (x[j] - c[j]);
      inside = s <= 1.0;
    }
    const double g = (t < a ? inner_density : 0.0) + outer_density;
    terms[k] = inside ? 1.0 / g : 0.0;
  }
  return pairwise_sum(terms) / static_cast<double>(points);
}

}  // namespace randset
