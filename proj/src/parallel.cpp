#include "randset/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "randset/error.hpp"
#include "randset/summary.hpp"

namespace randset {

void configure_threads_from_env() {
  const char* raw = std::getenv("RANDSET_THREADS");
  if (raw == nullptr || *raw == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(raw, &end, 10);
  if (end != nullptr && *end == '\0' && n > 0) omp_set_num_threads(static_cast<int>(n));
}

int worker_count() { return omp_get_max_threads(); }

namespace detail {

void parallel_for_indices(std::size_t n, void (*body)(std::size_t, void*), void* ctx) {
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i), ctx);
}

}  // namespace detail

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 32;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double sample_variance(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  const double mean = pairwise_sum(values) / static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  return pairwise_sum(sq) / static_cast<double>(n - 1);
}

Estimate mean_estimate(std::span<const double> values) {
  if (values.empty()) throw DomainError("mean_estimate: empty sample");
  const auto n = static_cast<double>(values.size());
  return {pairwise_sum(values) / n, std::sqrt(sample_variance(values) / n)};
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DomainError("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile: q outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("pearson_correlation: bad lengths");
  const auto n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n;
  const double my = pairwise_sum(y) / n;
  std::vector<double> xy(x.size()), xx(x.size()), yy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xy[i] = (x[i] - mx) * (y[i] - my);
    xx[i] = (x[i] - mx) * (x[i] - mx);
    yy[i] = (y[i] - my) * (y[i] - my);
  }
  const double denom = std::sqrt(pairwise_sum(xx) * pairwise_sum(yy));
  return denom > 0.0 ? pairwise_sum(xy) / denom : 0.0;
}

}  // namespace randset
