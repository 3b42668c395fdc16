#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "randset/models.hpp"
#include "randset/ppp.hpp"
#include "randset/rng.hpp"
#include "randset/summary.hpp"

namespace randset {

using RealMap = std::function<double(double)>;

// Lune fraction in the plane from the two-circle intersection area.
double f_closed_form_2d(double r);

// Tangent-hyperplane analogue of the lune fraction, as a finite Gamma sum.
// d = 1 gives r / 2. r in [0, 1].
double g_sum(int d, double r);

// Same quantity by adaptive Gauss-Kronrod quadrature over the latitude angle.
double g_quadrature(int d, double r, double tol = 1e-14);

// \int_0^{pi/2} cos^k(a) sin^m(a) da.
double latitude_integral_quadrature(int k, int m);
double latitude_integral_gamma(int k, int m);

// Hit-or-miss estimate of P(r e_1 not in A^mu): the fraction of n random
// copies of the shape whose exit time along e_1 is below r.
Estimate f_generic_mc(const ShapeKind& shape, const RadialMeasure& mu, int d, double r,
                      std::size_t n, RngStream& rng);

// Bracketed root-finding inverse of an increasing map on [lo, hi] to tol.
double invert_increasing(const RealMap& f, double y, double lo = 0.0, double hi = 1.0,
                         double tol = 1e-13);

// Law of the radius R with P(R > r) = exp(-lambda omega_d F(r)).
class RadiusLaw {
 public:
  RadiusLaw(int d, double lambda, RealMap F);

  int dim() const noexcept { return d_; }
  double lambda() const noexcept { return lambda_; }
  double F(double r) const { return F_(r); }
  double F_at_one() const noexcept { return f1_; }
  double scale() const noexcept { return scale_; }  // lambda * omega_d

  double survival(double r) const;
  // Exp(1) inversion; returns the atom 1 when the variate exceeds scale * F(1).
  double sample(RngStream& rng) const;

 private:
  int d_;
  double lambda_;
  RealMap F_;
  double f1_;
  double scale_;
};

double sample_radius_exact(int d, double lambda, const RealMap& F, RngStream& rng);

// d omega_d \int_0^1 r^{d-1} exp(-lambda omega_d F(r)) dr.
double expected_volume_quadrature(int d, double lambda, const RealMap& F);

// d! omega_d / omega_{d-1}^d.
double asymptotic_volume_constant(int d);

struct GoudsmitConstants {
  int d;
  double c_d;
  double mean_typical;
  double moment_ratio;
  double zero_cell_mean;
};

// Hyperplane field meeting the unit ball at rate 2.
GoudsmitConstants goudsmit_constants(int d);

// sup |F_n - F| over the sample.
double ks_statistic(std::span<const double> samples, const RealMap& cdf);
double ks_two_sample_statistic(std::span<const double> a, std::span<const double> b);
// P(K > x) for the Kolmogorov distribution.
double kolmogorov_survival(double x);
// Asymptotic p-value with the Stephens small-sample correction.
double ks_pvalue(double statistic, double effective_n);
double ks_two_sample_pvalue(std::span<const double> a, std::span<const double> b);

// omega_d * mean(R^d) with its standard error.
Estimate radius_moment_volume(int d, std::span<const double> radius_samples);

// One defensive-importance-sampling estimate of |I^lambda| for the ball
// model: a fresh process and `points` probes drawn half from B_a, half from B.
double hit_or_miss_volume(int d, double lambda, std::size_t points, RngStream& rng);

}  // namespace randset
