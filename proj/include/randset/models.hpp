#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "randset/geomcore.hpp"
#include "randset/ppp.hpp"
#include "randset/rng.hpp"
#include "randset/summary.hpp"

namespace randset {

// {x : <x, normal> <= offset}. Offsets above 1 are allowed for tessellation use.
struct HalfSpace {
  HalfSpace(Direction n, double off);

  Direction normal;
  double offset;
};

struct BallShape {};
struct HalfSpaceShape {};
// Planar cone with apex C = P theta, axis -theta and half-angle beta in (0, pi).
struct ConeShape {
  double beta;
};
using ShapeKind = std::variant<BallShape, HalfSpaceShape, ConeShape>;

// Throws UnsupportedConfiguration for a cone outside d = 2, DomainError for a bad beta.
void validate_shape(const ShapeKind& shape, int d);

// Exit time along t theta of the copy of the shape attached to process point c.
// Infinity when the ray never leaves it.
double shape_exit_time(const ShapeKind& shape, std::span<const double> c,
                       std::span<const double> theta);

// min(1, positive root of |t theta - C| = 1 over the centers); 1 when there are none.
double ball_intersection_radius(int d, std::span<const double> centers_flat,
                                std::span<const double> theta);
double ball_intersection_radius(const ProcessSample& centers, const Direction& theta);

// Positive root of |t theta - c| = 1 for |c| <= 1.
double ball_exit_time(std::span<const double> c, std::span<const double> theta);

double halfspace_intersection_radius(std::span<const HalfSpace> halfspaces, const Direction& theta);

// Radius of the realized model in direction theta, min(1, exit times).
double model_radius(const ShapeKind& shape, const ProcessSample& sample,
                    std::span<const double> theta);

// Samples the process and returns the realized intersection I^{mu, lambda}_A.
StarSet build_intersection(int d, double lambda, const RadialMeasure& mu, const ShapeKind& shape,
                           RngStream& rng);
StarSet intersection_from_sample(const ShapeKind& shape,
                                 std::shared_ptr<const ProcessSample> sample);

// One fresh realization, radius along e_1.
double sample_model_radius(int d, double lambda, const RadialMeasure& mu, const ShapeKind& shape,
                           RngStream& rng);

bool membership(const StarSet& s, std::span<const double> x);

// Poisson hyperplane field: `rate` is the mean number of hyperplanes met per
// unit of distance from the origin, all directions pooled.
struct HyperplaneNormalization {
  double rate;

  // Measure of hyperplanes meeting the unit ball equal to 2.
  static HyperplaneNormalization ball_rate_two() { return {2.0}; }
  static HyperplaneNormalization custom(double rate);
};

struct CroftonCell {
  StarSet cell;
  std::vector<HalfSpace> planes;
  double volume = 0.0;
  double window = 0.0;
  int enlargements = 0;
  // Vertices in counterclockwise order (d = 2 only).
  std::vector<std::pair<double, double>> polygon;
};

// Cell of the origin cut out by the given planes. d = 2 clips a square and
// computes the exact polygon; d >= 3 evaluates the radius function on a
// Fibonacci or random grid of probe_size rays. Throws UnboundedCell if the cell
// is not contained in the open ball of radius window.
CroftonCell zero_cell_from_planes(int d, std::vector<HalfSpace> planes, double window,
                                  std::size_t probe_size = 2000);

// Samples hyperplanes at distance < window, doubling the window up to
// max_enlargements times while the cell reaches it.
CroftonCell crofton_cell(int d, HyperplaneNormalization norm, double window_radius,
                         RngStream& rng, int max_enlargements = 3,
                         std::size_t probe_size = 2000);

double polygon_area(std::span<const std::pair<double, double>> vertices);

// Pairwise intersection points of planar lines {x . n = offset} inside the
// open disk of the given radius. The expected count is the disk area times
// the cell intensity of the line tessellation.
std::size_t vertices_in_disk(std::span<const HalfSpace> lines, double radius);

// Lines of the field crossing the segment [0, l e_1].
std::uint64_t segment_crossings(double l, HyperplaneNormalization norm, RngStream& rng);

struct SphereCell {
  StarSet cell;
  std::vector<double> radii;
  // Fraction of rays on which the first crossing may not bound the whole
  // component along that ray.
  double diagnostic_rate = 0.0;
};

// First-hit ray casting against the unit circles around the centers, capped at 1.
SphereCell sphere_tessellation_cell_2d(const ProcessSample& centers, const DirectionGrid& grid);

struct CouplingOutput {
  ProcessSample tess_points;
  // (S - 2) Theta for outer points, the point itself for inner ones.
  std::vector<double> shifted_points;
  // Shifted points after the radial transport.
  std::vector<double> transported_points;
  // I' over the transported points and an independent bulk sample on |x| < 1 - eps.
  StarSet intersection_set;
  StarSet tess_cell;
  std::vector<double> intersection_eps_radii;
  std::vector<double> tess_radii;
  double hausdorff_scaled = 0.0;
  double diagnostic_rate = 0.0;
  std::size_t bulk_count = 0;
};

// tess_sample: annulus Sh(eps) at intensity lambda / 2.
CouplingOutput coupling_transform(const ProcessSample& tess_sample, double eps, RngStream& rng,
                                  std::size_t grid_size = 2048);

// Endpoints of U = [-1, 1] cut by c + [-1, 1] over a Poisson process of
// intensity lambda on [-1, 1].
std::pair<double, double> warmup_1d(double lambda, RngStream& rng);

enum class MeetingModel { Boolean, HyperplaneTess, SphereTess };

// Number of balls, hyperplanes or spheres of one realization meeting B_eps.
std::uint64_t meeting_count(MeetingModel model, int d, double lambda, double eps, RngStream& rng);

Estimate count_meeting_origin_ball(MeetingModel model, int d, double lambda, double eps,
                                   std::size_t replicates, RngStream& rng);

// Exact mean of meeting_count.
double meeting_count_mean(MeetingModel model, int d, double lambda, double eps);

}  // namespace randset
