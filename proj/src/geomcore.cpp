#include "randset/geomcore.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "randset/error.hpp"
#include "randset/rng.hpp"

namespace randset {

namespace {

void require_dimension(int d, const char* where) {
  if (d < 1) throw DomainError(std::string(where) + ": dimension must be >= 1");
}

}  // namespace

double unit_ball_volume(int d) {
  if (d < 0) throw DomainError("unit_ball_volume: negative dimension");
  const double half = 0.5 * d;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double sphere_area(int d) {
  require_dimension(d, "sphere_area");
  return d * unit_ball_volume(d);
}

double lune_fraction(int d, double r) {
  require_dimension(d, "lune_fraction");
  if (!(r >= 0.0 && r <= 2.0)) throw DomainError("lune_fraction: r outside [0, 2]");
  if (r == 0.0) return 0.0;
  if (r == 2.0) return 1.0;
  return boost::math::ibeta(0.5, 0.5 * (d + 1), 0.25 * r * r);
}

double wedge_volume(int d, double r) {
  require_dimension(d, "wedge_volume");
  if (r < 0.0) throw DomainError("wedge_volume: negative r");
  return unit_ball_volume(d - 1) * r;
}

double wedge_lune_gap_bound(int d, double r) {
  require_dimension(d, "wedge_lune_gap_bound");
  return (d - 1) * unit_ball_volume(d - 1) * r * r * r / 16.0;
}

double cap_hyp_distance(double delta) {
  if (!(delta > 0.0 && delta < 0.5 * std::numbers::pi))
    throw DomainError("cap_hyp_distance: delta outside (0, pi/2)");
  // 1 - cos(delta) without cancellation.
  const double s = std::sin(0.5 * delta);
  return 2.0 * s * s;
}

bool cap_hyp_within_bound(double delta) { return cap_hyp_distance(delta) <= delta * delta; }

Direction::Direction(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw DomainError("Direction: empty coordinate vector");
  double norm2 = 0.0;
  for (double c : coords_) norm2 += c * c;
  const double norm = std::sqrt(norm2);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("Direction: zero or non-finite vector");
  if (std::abs(norm - 1.0) > kNormTolerance)
    for (double& c : coords_) c /= norm;
}

Direction Direction::axis(int d, int k, double sign) {
  require_dimension(d, "Direction::axis");
  if (k < 0 || k >= d) throw DomainError("Direction::axis: index out of range");
  std::vector<double> c(static_cast<std::size_t>(d), 0.0);
  c[static_cast<std::size_t>(k)] = sign < 0 ? -1.0 : 1.0;
  return Direction(std::move(c));
}

Direction Direction::from_angle(double phi) { return Direction({std::cos(phi), std::sin(phi)}); }

double Direction::dot(std::span<const double> x) const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < coords_.size(); ++i) s += coords_[i] * x[i];
  return s;
}

DirectionGrid::DirectionGrid(int dim, std::vector<Direction> points, GridKind kind)
    : dim_(dim), points_(std::move(points)), kind_(kind) {
  require_dimension(dim, "DirectionGrid");
  if (points_.empty()) throw DomainError("DirectionGrid: empty grid");
  for (const auto& p : points_)
    if (p.dim() != dim_) throw DomainError("DirectionGrid: direction of wrong dimension");
}

double DirectionGrid::weight() const noexcept {
  return sphere_area(dim_) / static_cast<double>(points_.size());
}

DirectionGrid direction_grid(int d, std::size_t n, std::uint64_t seed) {
  require_dimension(d, "direction_grid");
  if (n == 0) throw DomainError("direction_grid: n must be >= 1");
  std::vector<Direction> pts;
  if (d == 1) {
    pts = {Direction({1.0}), Direction({-1.0})};
    return DirectionGrid(1, std::move(pts), GridKind::Antipodal1d);
  }
  pts.reserve(n);
  if (d == 2) {
    for (std::size_t k = 0; k < n; ++k)
      pts.push_back(Direction::from_angle(2.0 * std::numbers::pi * static_cast<double>(k) /
                                          static_cast<double>(n)));
    return DirectionGrid(2, std::move(pts), GridKind::Regular2d);
  }
  if (d == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < n; ++k) {
      const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(n);
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(k);
      pts.push_back(Direction({rho * std::cos(phi), rho * std::sin(phi), z}));
    }
    return DirectionGrid(3, std::move(pts), GridKind::Fibonacci3d);
  }
  RngStream rng(seed, 0);
  std::normal_distribution<double> gauss;
  std::vector<double> c(static_cast<std::size_t>(d));
  while (pts.size() < n) {
    double norm2 = 0.0;
    for (double& x : c) {
      x = gauss(rng);
      norm2 += x * x;
    }
    if (norm2 > 1e-24) pts.emplace_back(c);
  }
  return DirectionGrid(d, std::move(pts), GridKind::RandomD);
}

StarSet::StarSet(int dim, RadiusFn radius, double radius_bound)
    : dim_(dim), radius_(std::make_shared<const RadiusFn>(std::move(radius))), bound_(radius_bound) {
  require_dimension(dim, "StarSet");
  if (!*radius_) throw DomainError("StarSet: empty radius function");
  if (!(radius_bound > 0.0)) throw DomainError("StarSet: radius bound must be positive");
}

double StarSet::radius(const Direction& theta) const {
  if (theta.dim() != dim_) throw DomainError("StarSet::radius: dimension mismatch");
  return (*radius_)(theta);
}

std::vector<double> StarSet::radii(const DirectionGrid& grid) const {
  if (grid.dim() != dim_) throw DomainError("StarSet::radii: dimension mismatch");
  std::vector<double> out;
  out.reserve(grid.size());
  for (const auto& theta : grid.points()) out.push_back((*radius_)(theta));
  return out;
}

bool StarSet::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw DomainError("StarSet::contains: dimension mismatch");
  double norm2 = 0.0;
  for (double c : x) norm2 += c * c;
  if (norm2 == 0.0) return true;
  const double norm = std::sqrt(norm2);
  std::vector<double> u(x.begin(), x.end());
  for (double& c : u) c /= norm;
  return norm <= (*radius_)(Direction(std::move(u)));
}

double star_volume(int d, std::span<const double> radii, const DirectionGrid& grid) {
  if (grid.dim() != d) throw DomainError("star_volume: dimension mismatch");
  if (radii.size() != grid.size()) throw DomainError("star_volume: radii/grid length mismatch");
  double sum = 0.0;
  for (double r : radii) sum += std::pow(r, d);
  return sum * grid.weight() / d;
}

double star_volume(const StarSet& set, const DirectionGrid& grid) {
  if (grid.dim() != set.dim()) throw DomainError("star_volume: dimension mismatch");
  const auto r = set.radii(grid);
  return star_volume(set.dim(), r, grid);
}

double hausdorff_star(std::span<const double> f_radii, std::span<const double> g_radii) {
  if (f_radii.size() != g_radii.size()) throw DomainError("hausdorff_star: length mismatch");
  if (f_radii.empty()) throw DomainError("hausdorff_star: empty grid");
  double sup = 0.0;
  for (std::size_t i = 0; i < f_radii.size(); ++i)
    sup = std::max(sup, std::abs(f_radii[i] - g_radii[i]));
  return sup;
}

double hausdorff_star(const StarSet& f, const StarSet& g, const DirectionGrid& grid) {
  if (f.dim() != g.dim() || f.dim() != grid.dim())
    throw DomainError("hausdorff_star: dimension mismatch");
  const auto a = f.radii(grid);
  const auto b = g.radii(grid);
  return hausdorff_star(a, b);
}

}  // namespace randset
