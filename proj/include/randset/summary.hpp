#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace randset {

// A Monte Carlo estimate and its standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Sum in a fixed binary tree over the index range. The association order
// depends only on the length, never on how the values were produced.
double pairwise_sum(std::span<const double> values);

Estimate mean_estimate(std::span<const double> values);

// Unbiased sample variance.
double sample_variance(std::span<const double> values);

// Linear-interpolated empirical quantile, q in [0, 1].
double quantile(std::vector<double> values, double q);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace randset
