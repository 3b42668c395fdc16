#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace randset {

// Volume of the unit ball, pi^{d/2} / Gamma(d/2 + 1). Defined for d >= 0
// (omega_0 = 1, which the lower-dimensional constants rely on).
double unit_ball_volume(int d);

// Surface area of the unit sphere in R^d, d * omega_d.
double sphere_area(int d);

// Normalized lune volume |B \ (r e_1 + B)| / omega_d for r in [0, 2].
// Computed as I_{r^2/4}(1/2, (d+1)/2), the complementary form of the
// regularized incomplete beta expression for the two-cap lens; accurate
// at small r.
double lune_fraction(int d, double r);

// Volume omega_{d-1} r of the half-sphere shifted by r along e_1.
double wedge_volume(int d, double r);

// Leading-order bound (d-1) omega_{d-1} r^3 / 16 on the wedge/lune gap.
double wedge_lune_gap_bound(int d, double r);

// Hausdorff distance 1 - cos(delta) between a spherical cap and its
// tangent hyperplane patch. delta in (0, pi/2).
double cap_hyp_distance(double delta);
bool cap_hyp_within_bound(double delta);

// Unit vector in R^d. Construction normalizes; a zero vector is rejected.
class Direction {
 public:
  static constexpr double kNormTolerance = 1e-12;

  explicit Direction(std::vector<double> coords);

  static Direction axis(int d, int k, double sign = 1.0);
  static Direction from_angle(double phi);

  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  double dot(std::span<const double> x) const noexcept;

  bool operator==(const Direction&) const = default;

 private:
  std::vector<double> coords_;
};

enum class GridKind { Regular2d, Fibonacci3d, RandomD, Antipodal1d };

class DirectionGrid {
 public:
  DirectionGrid(int dim, std::vector<Direction> points, GridKind kind);

  int dim() const noexcept { return dim_; }
  GridKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return points_.size(); }
  const Direction& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Direction>& points() const noexcept { return points_; }

  // Equal quadrature weight sigma(S) / n.
  double weight() const noexcept;

 private:
  int dim_;
  std::vector<Direction> points_;
  GridKind kind_;
};

// d = 1: the two points {+1, -1} whatever n is; d = 2: n equally spaced
// angles starting at 0; d = 3: Fibonacci spiral; d >= 4: n iid uniform
// directions drawn from (seed, stream 0).
DirectionGrid direction_grid(int d, std::size_t n, std::uint64_t seed = 0);

// Star-shaped set about the origin, {t theta : 0 <= t <= radius(theta)}.
// Intersection models have radius_bound 1; tessellation cells may exceed it.
class StarSet {
 public:
  using RadiusFn = std::function<double(const Direction&)>;

  StarSet(int dim, RadiusFn radius, double radius_bound = 1.0);

  int dim() const noexcept { return dim_; }
  double radius_bound() const noexcept { return bound_; }
  double radius(const Direction& theta) const;
  std::vector<double> radii(const DirectionGrid& grid) const;

  // |x| <= radius(x / |x|); the origin is always a member.
  bool contains(std::span<const double> x) const;

 private:
  int dim_;
  std::shared_ptr<const RadiusFn> radius_;
  double bound_;
};

// Equal-weight quadrature of (1/d) \int_S f(theta)^d dsigma.
double star_volume(const StarSet& set, const DirectionGrid& grid);
double star_volume(int d, std::span<const double> radii, const DirectionGrid& grid);

// sup over grid directions of |f(theta) - g(theta)|. For star sets sharing
// the origin this upper-bounds the Hausdorff distance of the sets; it is a
// grid approximation of that supremum.
double hausdorff_star(const StarSet& f, const StarSet& g, const DirectionGrid& grid);
double hausdorff_star(std::span<const double> f_radii, std::span<const double> g_radii);

}  // namespace randset
