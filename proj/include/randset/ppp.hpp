#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "randset/rng.hpp"
#include "randset/summary.hpp"

namespace randset {

// Probability law on [0, 1] for the radial coordinate of process points.
class RadialMeasure {
 public:
  using Map = std::function<double(double)>;

  RadialMeasure(std::string name, Map cdf, Map inverse_cdf);

  // Inverse by bisection to 1e-12; cdf must be continuous and nondecreasing.
  static RadialMeasure from_cdf(std::string name, Map cdf);

  const std::string& name() const noexcept { return name_; }
  double cdf(double r) const { return cdf_(r); }
  double inverse_cdf(double u) const { return inverse_(u); }

 private:
  std::string name_;
  Map cdf_;
  Map inverse_;
};

// rho(0, r) = r^d: uniform points in the unit ball.
RadialMeasure rho_measure(int d);
// nu_hat(0, r) = 1 - (1 - r)^d: offsets of half-spaces tangent-matched to balls.
RadialMeasure nu_hat_measure(int d);

enum class Region { Ball, InnerShell, OuterShell, Annulus };
enum class ShellSide { Inner, Outer, Both };

// A realized configuration. Coordinates are stored flat, point i occupying
// [i*d, (i+1)*d).
class ProcessSample {
 public:
  ProcessSample(int dim, double lambda, Region region, double eps, std::uint64_t seed,
                std::uint64_t stream_id);

  int dim() const noexcept { return dim_; }
  double lambda() const noexcept { return lambda_; }
  Region region() const noexcept { return region_; }
  double eps() const noexcept { return eps_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::size_t size() const noexcept { return coords_.size() / static_cast<std::size_t>(dim_); }
  bool empty() const noexcept { return coords_.empty(); }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(coords_).subspan(i * static_cast<std::size_t>(dim_),
                                                    static_cast<std::size_t>(dim_));
  }
  const std::vector<double>& coords() const noexcept { return coords_; }
  double norm(std::size_t i) const;

  // Exact region predicate for the declared region.
  bool in_region(std::span<const double> x) const;

  void push_back(std::span<const double> x);
  void reserve(std::size_t n) { coords_.reserve(n * static_cast<std::size_t>(dim_)); }

 private:
  int dim_;
  double lambda_;
  Region region_;
  double eps_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::vector<double> coords_;
};

// Inversion below mean 30, Hormann's PTRS transformed rejection above.
std::uint64_t sample_poisson_count(double mean, RngStream& rng);

// Uniform direction on S^{d-1} written into out (size d).
void sample_direction(int d, RngStream& rng, std::span<double> out);

// Product process: Poisson(lambda * omega_d) points, radii from mu, uniform
// angles. With mu = rho this is the uniform process of intensity lambda on B.
ProcessSample sample_product_process(int d, double lambda, const RadialMeasure& mu,
                                     RngStream& rng);

// Uniform Poisson points of intensity lambda on Sh^-(eps), Sh^+(eps) or the
// annulus between them.
ProcessSample sample_shell(int d, double lambda, double eps, ShellSide side, RngStream& rng);

// Uniform Poisson points of intensity lambda on the open ball of the given radius.
ProcessSample sample_ball(int d, double lambda, double radius, RngStream& rng);

// Radial laws of the coupling, in terms of the distance w = 1 - R from the
// unit sphere, w in [0, eps]:
//   H(w)  = P(R  <= 1 - w) for uniform points on the inner shell,
//   H'(w) = P(R' <= 1 - w) for annulus points folded into the inner shell
//           by s theta -> (2 - s) theta  (radius of (s - 2) theta).
// Both decrease from 1 at w = 0 to 0 at w = eps.
class ShellTransport {
 public:
  ShellTransport(int d, double eps);

  int dim() const noexcept { return d_; }
  double eps() const noexcept { return eps_; }

  double H(double w) const;
  double H_prime(double w) const;
  double H_inverse(double u) const;
  double H_prime_inverse(double u) const;

  // Monotone transport carrying the H' law onto the H law: w -> H^{-1}(H'(w)).
  double to_inner(double w_folded) const;
  // Its inverse, w -> H'^{-1}(H(w)).
  double to_folded(double w_inner) const;

  // sup over an (n + 1)-point sweep of [0, eps] of |w - to_folded(w)|.
  double max_displacement(std::size_t n = 10000) const;

 private:
  void check(double w) const;

  int d_;
  double eps_;
  double inner_mass_;   // 1 - (1 - eps)^d
  double folded_mass_;  // (1 + eps)^d - (1 - eps)^d
};

ShellTransport radial_cdfs_H(double eps, int d);

// K lambda^{ln(1 - a_star)}: bound on P(T > log lambda) for the coupon collector.
double coupon_bound(int K, double a_star, double lambda);

// Monte Carlo estimate of P(T > t) for iid draws from probs.
Estimate coupon_empirical(std::span<const double> probs, int t, std::size_t replicates,
                          RngStream& rng);

// Exact total variation distance between Poisson(mu) and Poisson(mu + delta).
double poisson_tv_distance(double mu, double delta);

struct PoissonTail {
  double eps;          // log^2(lambda) / lambda
  double mean;         // lambda * vol(Sh(eps))
  double probability;  // P(Poisson(mean) < log lambda)
  double bound;        // 1 / lambda
  bool holds;
};

// Evaluates P(Y < log lambda) < 1 / lambda for Y ~ Poisson(V_eps lambda),
// V_eps the volume of the two-sided shell at eps = log^2(lambda) / lambda.
PoissonTail poisson_tail_check(double lambda, int d);

struct PoissonBoundCheck {
  double tv;
  bool tv_within_delta;
  PoissonTail tail;
};

PoissonBoundCheck poisson_tv_and_tail(double mu, double delta, double lambda, int d);

}  // namespace randset
