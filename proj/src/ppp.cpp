#include "randset/ppp.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "randset/error.hpp"
#include "randset/geomcore.hpp"

namespace randset {

namespace {

// Bisection for an increasing map on [lo, hi].
double bisect_increasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, double tol = 1e-12) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// a^d - b^d as (a - b) * sum a^{d-1-k} b^k, with a - b supplied exactly.
double pow_difference(double a, double b, double a_minus_b, int d) {
  double sum = 0.0;
  double ap = 1.0;
  for (int k = 0; k < d; ++k) ap *= a;  // a^d, walked down below
  ap /= a;
  double bp = 1.0;
  for (int k = 0; k < d; ++k) {
    sum += ap * bp;
    ap /= a;
    bp *= b;
  }
  return a_minus_b * sum;
}

// (1 + w)^d - (1 - w)^d = 2 * sum_{k odd} C(d, k) w^k.
double odd_binomial_sum(double w, int d) {
  double sum = 0.0;
  double binom = 1.0;
  double wp = 1.0;
  for (int k = 0; k <= d; ++k) {
    if (k > 0) {
      binom = binom * (d - k + 1) / k;
      wp *= w;
    }
    if (k % 2 == 1) sum += binom * wp;
  }
  return 2.0 * sum;
}

void require_dim(int d, const char* where) {
  if (d < 1) throw DomainError(std::string(where) + ": dimension must be >= 1");
}

}  // namespace

RadialMeasure::RadialMeasure(std::string name, Map cdf, Map inverse_cdf)
    : name_(std::move(name)), cdf_(std::move(cdf)), inverse_(std::move(inverse_cdf)) {
  if (!cdf_ || !inverse_) throw DomainError("RadialMeasure: empty map");
}

RadialMeasure RadialMeasure::from_cdf(std::string name, Map cdf) {
  auto inverse = [cdf](double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return bisect_increasing(cdf, u, 0.0, 1.0);
  };
  return RadialMeasure(std::move(name), std::move(cdf), std::move(inverse));
}

RadialMeasure rho_measure(int d) {
  require_dim(d, "rho_measure");
  const double inv_d = 1.0 / d;
  if (d == 2)
    return RadialMeasure(
        "rho", [](double r) { return r * r; }, [](double u) { return std::sqrt(u); });
  return RadialMeasure(
      "rho", [d](double r) { return std::pow(r, d); },
      [inv_d](double u) { return std::pow(u, inv_d); });
}

RadialMeasure nu_hat_measure(int d) {
  require_dim(d, "nu_hat_measure");
  return RadialMeasure(
      "nu_hat", [d](double r) { return -std::expm1(d * std::log1p(-r)); },
      [d](double u) { return -std::expm1(std::log1p(-u) / d); });
}

ProcessSample::ProcessSample(int dim, double lambda, Region region, double eps, std::uint64_t seed,
                             std::uint64_t stream_id)
    : dim_(dim), lambda_(lambda), region_(region), eps_(eps), seed_(seed), stream_id_(stream_id) {
  require_dim(dim, "ProcessSample");
}

double ProcessSample::norm(std::size_t i) const {
  double s = 0.0;
  for (double c : point(i)) s += c * c;
  return std::sqrt(s);
}

bool ProcessSample::in_region(std::span<const double> x) const {
  double s = 0.0;
  for (double c : x) s += c * c;
  const double r = std::sqrt(s);
  switch (region_) {
    case Region::Ball:
      // eps carries the ball radius for Region::Ball.
      return r <= eps_;
    case Region::InnerShell:
      return r > 1.0 - eps_ && r < 1.0;
    case Region::OuterShell:
      return r > 1.0 && r < 1.0 + eps_;
    case Region::Annulus:
      return r > 1.0 - eps_ && r < 1.0 + eps_;
  }
  return false;
}

void ProcessSample::push_back(std::span<const double> x) {
  if (static_cast<int>(x.size()) != dim_) throw DomainError("ProcessSample: point dimension");
  coords_.insert(coords_.end(), x.begin(), x.end());
}

std::uint64_t sample_poisson_count(double mean, RngStream& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw DomainError("sample_poisson_count: bad mean");
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    double p = std::exp(-mean);
    double cdf = p;
    const double u = rng.uniform();
    std::uint64_t k = 0;
    while (u > cdf && k < 1000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  // PTRS (Hormann 1993).
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform_open();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0))
      return static_cast<std::uint64_t>(k);
  }
}

void sample_direction(int d, RngStream& rng, std::span<double> out) {
  if (d == 1) {
    out[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    return;
  }
  if (d == 2) {
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    out[0] = std::cos(phi);
    out[1] = std::sin(phi);
    return;
  }
  if (d == 3) {
    const double z = 2.0 * rng.uniform() - 1.0;
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    out[0] = rho * std::cos(phi);
    out[1] = rho * std::sin(phi);
    out[2] = z;
    return;
  }
  std::normal_distribution<double> gauss;
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (int i = 0; i < d; ++i) {
      out[static_cast<std::size_t>(i)] = gauss(rng);
      norm2 += out[static_cast<std::size_t>(i)] * out[static_cast<std::size_t>(i)];
    }
  } while (norm2 < 1e-24);
  const double inv = 1.0 / std::sqrt(norm2);
  for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] *= inv;
}

namespace {

// Poisson(mean) points with uniform angles and radius = radius_of(U).
template <class RadiusOf>
ProcessSample sample_radial(int d, double lambda, double mean, Region region, double eps,
                            RngStream& rng, RadiusOf&& radius_of) {
  ProcessSample out(d, lambda, region, eps, rng.seed(), rng.stream_id());
  const std::uint64_t n = sample_poisson_count(mean, rng);
  out.reserve(n);
  std::vector<double> x(static_cast<std::size_t>(d));
  for (std::uint64_t i = 0; i < n; ++i) {
    const double r = radius_of(rng.uniform_open());
    sample_direction(d, rng, x);
    for (double& c : x) c *= r;
    out.push_back(x);
  }
  return out;
}

}  // namespace

ProcessSample sample_product_process(int d, double lambda, const RadialMeasure& mu,
                                     RngStream& rng) {
  require_dim(d, "sample_product_process");
  if (!(lambda >= 0.0)) throw DomainError("sample_product_process: negative intensity");
  return sample_radial(d, lambda, lambda * unit_ball_volume(d), Region::Ball, 1.0, rng,
                       [&mu](double u) { return mu.inverse_cdf(u); });
}

ProcessSample sample_shell(int d, double lambda, double eps, ShellSide side, RngStream& rng) {
  require_dim(d, "sample_shell");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("sample_shell: eps outside (0, 1)");
  if (!(lambda >= 0.0)) throw DomainError("sample_shell: negative intensity");
  const double inner = side == ShellSide::Outer ? 1.0 : std::pow(1.0 - eps, d);
  const double outer = side == ShellSide::Inner ? 1.0 : std::pow(1.0 + eps, d);
  const Region region = side == ShellSide::Inner   ? Region::InnerShell
                        : side == ShellSide::Outer ? Region::OuterShell
                                                   : Region::Annulus;
  const double mean = lambda * unit_ball_volume(d) * (outer - inner);
  const double lo = side == ShellSide::Outer ? 1.0 : 1.0 - eps;
  const double hi = side == ShellSide::Inner ? 1.0 : 1.0 + eps;
  const double inv_d = 1.0 / d;
  return sample_radial(d, lambda, mean, region, eps, rng, [=](double u) {
    const double r = std::pow(inner + u * (outer - inner), inv_d);
    // Keep the open-interval predicate exact under rounding.
    return std::clamp(r, std::nextafter(lo, hi), std::nextafter(hi, lo));
  });
}

ProcessSample sample_ball(int d, double lambda, double radius, RngStream& rng) {
  require_dim(d, "sample_ball");
  if (!(radius > 0.0)) throw DomainError("sample_ball: radius must be positive");
  if (!(lambda >= 0.0)) throw DomainError("sample_ball: negative intensity");
  const double mean = lambda * unit_ball_volume(d) * std::pow(radius, d);
  const double inv_d = 1.0 / d;
  return sample_radial(d, lambda, mean, Region::Ball, radius, rng, [=](double u) {
    return std::min(radius * std::pow(u, inv_d), std::nextafter(radius, 0.0));
  });
}

ShellTransport::ShellTransport(int d, double eps) : d_(d), eps_(eps) {
  require_dim(d, "ShellTransport");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("ShellTransport: eps outside (0, 1)");
  inner_mass_ = -std::expm1(d * std::log1p(-eps));
  folded_mass_ = odd_binomial_sum(eps, d);
}

void ShellTransport::check(double w) const {
  if (!(w >= 0.0 && w <= eps_)) throw DomainError("ShellTransport: argument outside [0, eps]");
}

double ShellTransport::H(double w) const {
  check(w);
  return std::clamp(pow_difference(1.0 - w, 1.0 - eps_, eps_ - w, d_) / inner_mass_, 0.0, 1.0);
}

double ShellTransport::H_prime(double w) const {
  check(w);
  return 1.0 - odd_binomial_sum(w, d_) / folded_mass_;
}

double ShellTransport::H_inverse(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("ShellTransport::H_inverse: u outside [0, 1]");
  // (1 - w)^d = 1 - (1 - u) * inner_mass
  const double w = -std::expm1(std::log1p(-(1.0 - u) * inner_mass_) / d_);
  return std::clamp(w, 0.0, eps_);
}

double ShellTransport::H_prime_inverse(double u) const {
  if (!(u >= 0.0 && u <= 1.0))
    throw DomainError("ShellTransport::H_prime_inverse: u outside [0, 1]");
  const double target = (1.0 - u) * folded_mass_;
  if (d_ <= 2) return std::clamp(target / (2.0 * d_), 0.0, eps_);
  return bisect_increasing([this](double w) { return odd_binomial_sum(w, d_); }, target, 0.0, eps_,
                           eps_ * 1e-15);
}

double ShellTransport::to_inner(double w_folded) const { return H_inverse(H_prime(w_folded)); }

double ShellTransport::to_folded(double w_inner) const { return H_prime_inverse(H(w_inner)); }

double ShellTransport::max_displacement(std::size_t n) const {
  double sup = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double w = eps_ * static_cast<double>(i) / static_cast<double>(n);
    sup = std::max(sup, std::abs(w - to_folded(w)));
  }
  return sup;
}

ShellTransport radial_cdfs_H(double eps, int d) { return ShellTransport(d, eps); }

double coupon_bound(int K, double a_star, double lambda) {
  if (K < 1) throw DomainError("coupon_bound: K must be >= 1");
  if (!(a_star > 0.0 && a_star <= 1.0 / K + 1e-15))
    throw DomainError("coupon_bound: a_star outside (0, 1/K]");
  if (!(lambda > 1.0)) throw DomainError("coupon_bound: lambda must exceed 1");
  if (a_star >= 1.0) return 0.0;
  return K * std::exp(std::log1p(-a_star) * std::log(lambda));
}

Estimate coupon_empirical(std::span<const double> probs, int t, std::size_t replicates,
                          RngStream& rng) {
  if (probs.empty()) throw DomainError("coupon_empirical: empty distribution");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw DomainError("coupon_empirical: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("coupon_empirical: probabilities must sum to 1");
  if (t < 0 || replicates == 0) throw DomainError("coupon_empirical: bad t or replicates");

  std::vector<double> cumulative(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) cumulative[i] = acc += probs[i];
  cumulative.back() = 1.0;

  std::size_t misses = 0;
  std::vector<char> seen(probs.size());
  for (std::size_t rep = 0; rep < replicates; ++rep) {
    std::fill(seen.begin(), seen.end(), 0);
    std::size_t distinct = 0;
    for (int draw = 0; draw < t && distinct < probs.size(); ++draw) {
      const double u = rng.uniform();
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      const auto k = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
          it - cumulative.begin(), static_cast<std::ptrdiff_t>(probs.size()) - 1));
      if (!seen[k]) {
        seen[k] = 1;
        ++distinct;
      }
    }
    if (distinct < probs.size()) ++misses;
  }
  const double p = static_cast<double>(misses) / static_cast<double>(replicates);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(replicates))};
}

double poisson_tv_distance(double mu, double delta) {
  if (!(mu > 0.0)) throw DomainError("poisson_tv_distance: mu must be positive");
  if (!(delta >= 0.0)) throw DomainError("poisson_tv_distance: delta must be nonnegative");
  if (delta == 0.0) return 0.0;
  const double nu = mu + delta;
  const auto kmax = static_cast<std::uint64_t>(nu + 40.0 * std::sqrt(nu) + 100.0);
  double sum = 0.0;
  for (std::uint64_t k = 0; k <= kmax; ++k) {
    const double kd = static_cast<double>(k);
    const double lg = std::lgamma(kd + 1.0);
    const double p = std::exp(kd * std::log(mu) - mu - lg);
    const double q = std::exp(kd * std::log(nu) - nu - lg);
    sum += std::abs(p - q);
  }
  return 0.5 * sum;
}

PoissonTail poisson_tail_check(double lambda, int d) {
  require_dim(d, "poisson_tail_check");
  if (!(lambda > 1.0)) throw DomainError("poisson_tail_check: lambda must exceed 1");
  const double log_lambda = std::log(lambda);
  const double eps = log_lambda * log_lambda / lambda;
  if (!(eps < 1.0)) throw DomainError("poisson_tail_check: lambda too small for eps < 1");
  const double mean = lambda * unit_ball_volume(d) * odd_binomial_sum(eps, d);
  // Y < log(lambda)  <=>  Y <= ceil(log lambda) - 1
  const double kmax = std::ceil(log_lambda) - 1.0;
  const double probability = kmax < 0.0 ? 0.0 : boost::math::gamma_q(kmax + 1.0, mean);
  const double bound = 1.0 / lambda;
  return {eps, mean, probability, bound, probability < bound};
}

PoissonBoundCheck poisson_tv_and_tail(double mu, double delta, double lambda, int d) {
  const double tv = poisson_tv_distance(mu, delta);
  return {tv, tv <= delta, poisson_tail_check(lambda, d)};
}

}  // namespace randset
