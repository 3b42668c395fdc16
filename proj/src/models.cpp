#include "randset/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "randset/error.hpp"

namespace randset {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return dot(a, a); }

}  // namespace

HalfSpace::HalfSpace(Direction n, double off) : normal(std::move(n)), offset(off) {
  if (!(offset > 0.0) || !std::isfinite(offset))
    throw DomainError("HalfSpace: offset must be positive");
}

void validate_shape(const ShapeKind& shape, int d) {
  if (d < 1) throw DomainError("shape: dimension must be >= 1");
  if (const auto* cone = std::get_if<ConeShape>(&shape)) {
    if (d != 2) throw UnsupportedConfiguration("cone shapes are implemented for d = 2 only");
    if (!(cone->beta > 0.0 && cone->beta < std::numbers::pi))
      throw DomainError("cone: beta outside (0, pi)");
  }
}

double ball_exit_time(std::span<const double> c, std::span<const double> theta) {
  const double b = dot(theta, c);
  const double q = std::max(0.0, 1.0 - norm2(c));
  const double root = std::sqrt(b * b + q);
  if (b >= 0.0) return b + root;
  return root - b > 0.0 ? q / (root - b) : 0.0;
}

namespace {

double halfspace_exit_time(std::span<const double> c, std::span<const double> theta) {
  const double b = dot(theta, c);
  if (b <= 0.0) return kInf;
  return norm2(c) / b;
}

double cone_exit_time(double beta, std::span<const double> c, std::span<const double> theta) {
  const double p = std::sqrt(norm2(c));
  if (p == 0.0) return 0.0;
  // axis a = -c / p
  const double ax = -c[0] / p;
  const double ay = -c[1] / p;
  double t[2];
  for (int k = 0; k < 2; ++k) {
    const double phi = (k == 0 ? 1.0 : -1.0) * (beta + 0.5 * std::numbers::pi);
    const double nx = ax * std::cos(phi) - ay * std::sin(phi);
    const double ny = ax * std::sin(phi) + ay * std::cos(phi);
    const double den = theta[0] * nx + theta[1] * ny;
    const double num = c[0] * nx + c[1] * ny;
    t[k] = den > 0.0 ? num / den : kInf;
  }
  return beta <= 0.5 * std::numbers::pi ? std::min(t[0], t[1]) : std::max(t[0], t[1]);
}

}  // namespace

double shape_exit_time(const ShapeKind& shape, std::span<const double> c,
                       std::span<const double> theta) {
  if (std::holds_alternative<BallShape>(shape)) return ball_exit_time(c, theta);
  if (std::holds_alternative<HalfSpaceShape>(shape)) return halfspace_exit_time(c, theta);
  return cone_exit_time(std::get<ConeShape>(shape).beta, c, theta);
}

double ball_intersection_radius(int d, std::span<const double> centers_flat,
                                std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != d) throw DomainError("ball_intersection_radius: dimension");
  const auto du = static_cast<std::size_t>(d);
  if (centers_flat.size() % du != 0) throw DomainError("ball_intersection_radius: ragged centers");
  double r = 1.0;
  for (std::size_t i = 0; i < centers_flat.size(); i += du) {
    const auto c = centers_flat.subspan(i, du);
    if (norm2(c) > 1.0 + 1e-12) throw DomainError("ball_intersection_radius: center outside B");
    r = std::min(r, ball_exit_time(c, theta));
  }
  return r;
}

double ball_intersection_radius(const ProcessSample& centers, const Direction& theta) {
  return ball_intersection_radius(centers.dim(), centers.coords(), theta.coords());
}

double halfspace_intersection_radius(std::span<const HalfSpace> halfspaces,
                                     const Direction& theta) {
  double r = 1.0;
  for (const auto& h : halfspaces) {
    if (h.normal.dim() != theta.dim())
      throw DomainError("halfspace_intersection_radius: dimension mismatch");
    const double c = h.normal.dot(theta.coords());
    if (c > 0.0) r = std::min(r, h.offset / c);
  }
  return r;
}

double model_radius(const ShapeKind& shape, const ProcessSample& sample,
                    std::span<const double> theta) {
  double r = 1.0;
  for (std::size_t i = 0; i < sample.size(); ++i)
    r = std::min(r, shape_exit_time(shape, sample.point(i), theta));
  return r;
}

StarSet intersection_from_sample(const ShapeKind& shape,
                                 std::shared_ptr<const ProcessSample> sample) {
  validate_shape(shape, sample->dim());
  const int d = sample->dim();
  return StarSet(d, [shape, sample](const Direction& theta) {
    return model_radius(shape, *sample, theta.coords());
  });
}

StarSet build_intersection(int d, double lambda, const RadialMeasure& mu, const ShapeKind& shape,
                           RngStream& rng) {
  validate_shape(shape, d);
  auto sample = std::make_shared<const ProcessSample>(sample_product_process(d, lambda, mu, rng));
  return intersection_from_sample(shape, std::move(sample));
}

double sample_model_radius(int d, double lambda, const RadialMeasure& mu, const ShapeKind& shape,
                           RngStream& rng) {
  validate_shape(shape, d);
  const ProcessSample sample = sample_product_process(d, lambda, mu, rng);
  std::vector<double> e1(static_cast<std::size_t>(d), 0.0);
  e1[0] = 1.0;
  return model_radius(shape, sample, e1);
}

bool membership(const StarSet& s, std::span<const double> x) {
  if (std::sqrt(norm2(x)) > s.radius_bound() * (1.0 + 1e-12))
    throw DomainError("membership: point outside the model's ambient ball");
  return s.contains(x);
}

HyperplaneNormalization HyperplaneNormalization::custom(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw DomainError("HyperplaneNormalization: rate must be positive");
  return {rate};
}

double polygon_area(std::span<const std::pair<double, double>> v) {
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    twice += a.first * b.second - b.first * a.second;
  }
  return 0.5 * std::abs(twice);
}

std::size_t vertices_in_disk(std::span<const HalfSpace> lines, double radius) {
  std::size_t count = 0;
  const double r2 = radius * radius;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].normal.dim() != 2) throw DomainError("vertices_in_disk: lines must be planar");
    if (lines[i].offset >= radius) continue;
    const double a1 = lines[i].normal[0], b1 = lines[i].normal[1], p1 = lines[i].offset;
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (lines[j].offset >= radius) continue;
      const double a2 = lines[j].normal[0], b2 = lines[j].normal[1], p2 = lines[j].offset;
      const double det = a1 * b2 - a2 * b1;
      if (det == 0.0) continue;
      const double x = (p1 * b2 - p2 * b1) / det;
      const double y = (a1 * p2 - a2 * p1) / det;
      count += x * x + y * y < r2;
    }
  }
  return count;
}

namespace {

using Polygon = std::vector<std::pair<double, double>>;

// Sutherland-Hodgman step against {x . n <= p}.
Polygon clip(const Polygon& poly, double nx, double ny, double p) {
  Polygon out;
  out.reserve(poly.size() + 1);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    const double fa = a.first * nx + a.second * ny - p;
    const double fb = b.first * nx + b.second * ny - p;
    if (fa <= 0.0) out.push_back(a);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      const double s = fa / (fa - fb);
      out.emplace_back(a.first + s * (b.first - a.first), a.second + s * (b.second - a.second));
    }
  }
  return out;
}

double planes_radius(const std::vector<HalfSpace>& planes, std::span<const double> theta) {
  double r = kInf;
  for (const auto& h : planes) {
    const double c = h.normal.dot(theta);
    if (c > 0.0) r = std::min(r, h.offset / c);
  }
  return r;
}

std::optional<CroftonCell> try_zero_cell(int d, const std::vector<HalfSpace>& planes,
                                         double window, std::size_t probe_size) {
  auto shared = std::make_shared<const std::vector<HalfSpace>>(planes);
  StarSet cell(
      d, [shared](const Direction& theta) { return planes_radius(*shared, theta.coords()); },
      window);
  if (d == 2) {
    const double s = 2.0 * window;
    Polygon poly{{-s, -s}, {s, -s}, {s, s}, {-s, s}};
    for (const auto& h : planes) {
      poly = clip(poly, h.normal[0], h.normal[1], h.offset);
      if (poly.empty()) throw NumericalFailure("zero cell: clipping removed the origin");
    }
    for (const auto& [x, y] : poly)
      if (std::hypot(x, y) >= window) return std::nullopt;
    const double area = polygon_area(poly);
    return CroftonCell{std::move(cell), planes, area, window, 0, std::move(poly)};
  }
  const DirectionGrid grid = direction_grid(d, probe_size, 0);
  std::vector<double> radii;
  radii.reserve(grid.size());
  for (const auto& theta : grid.points()) {
    const double r = planes_radius(planes, theta.coords());
    if (!(r < window)) return std::nullopt;
    radii.push_back(r);
  }
  const double volume = star_volume(d, radii, grid);
  return CroftonCell{std::move(cell), planes, volume, window, 0, {}};
}

void append_planes(int d, double rate, double lo, double hi, RngStream& rng,
                   std::vector<HalfSpace>& planes) {
  const std::uint64_t n = sample_poisson_count(rate * (hi - lo), rng);
  std::vector<double> u(static_cast<std::size_t>(d));
  for (std::uint64_t i = 0; i < n; ++i) {
    const double rho = lo + (hi - lo) * rng.uniform_open();
    sample_direction(d, rng, u);
    planes.emplace_back(Direction(u), rho);
  }
}

}  // namespace

CroftonCell zero_cell_from_planes(int d, std::vector<HalfSpace> planes, double window,
                                  std::size_t probe_size) {
  if (d < 2) throw DomainError("zero_cell_from_planes: d must be >= 2");
  if (!(window > 0.0)) throw DomainError("zero_cell_from_planes: window must be positive");
  for (const auto& h : planes)
    if (h.normal.dim() != d) throw DomainError("zero_cell_from_planes: plane dimension");
  auto cell = try_zero_cell(d, planes, window, probe_size);
  if (!cell) throw UnboundedCell("zero cell reaches the window boundary");
  return std::move(*cell);
}

CroftonCell crofton_cell(int d, HyperplaneNormalization norm, double window_radius,
                         RngStream& rng, int max_enlargements, std::size_t probe_size) {
  if (d < 2) throw DomainError("crofton_cell: d must be >= 2");
  if (!(window_radius >= 10.0)) throw DomainError("crofton_cell: window radius must be >= 10");
  if (!(norm.rate > 0.0)) throw DomainError("crofton_cell: rate must be positive");
  std::vector<HalfSpace> planes;
  double window = window_radius;
  append_planes(d, norm.rate, 0.0, window, rng, planes);
  for (int enlargements = 0;; ++enlargements) {
    if (auto cell = try_zero_cell(d, planes, window, probe_size)) {
      cell->enlargements = enlargements;
      return std::move(*cell);
    }
    if (enlargements == max_enlargements)
      throw UnboundedCell("zero cell unbounded within window " + std::to_string(window));
    append_planes(d, norm.rate, window, 2.0 * window, rng, planes);
    window *= 2.0;
  }
}

std::uint64_t segment_crossings(double l, HyperplaneNormalization norm, RngStream& rng) {
  if (!(l >= 0.0)) throw DomainError("segment_crossings: negative length");
  if (!(norm.rate > 0.0)) throw DomainError("segment_crossings: rate must be positive");
  const std::uint64_t n = sample_poisson_count(norm.rate * l, rng);
  std::uint64_t hits = 0;
  double u[2];
  for (std::uint64_t i = 0; i < n; ++i) {
    const double rho = l * rng.uniform_open();
    sample_direction(2, rng, u);
    if (rho < l * u[0]) ++hits;
  }
  return hits;
}

SphereCell sphere_tessellation_cell_2d(const ProcessSample& centers, const DirectionGrid& grid) {
  if (centers.dim() != 2 || grid.dim() != 2)
    throw DomainError("sphere_tessellation_cell_2d: d must be 2");
  const std::size_t n = centers.size();
  std::vector<double> radii(grid.size(), 1.0);
  std::vector<std::pair<double, std::size_t>> events;
  std::vector<char> flipped(n, 0);
  std::size_t flagged = 0;

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto theta = grid[k].coords();
    events.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = centers.point(i);
      const double b = dot(theta, x);
      const double q = norm2(x) - 1.0;
      const double disc = b * b - q;
      if (disc < 0.0) continue;
      const double root = std::sqrt(disc);
      double t1, t2;
      if (b > 0.0) {
        t2 = b + root;
        t1 = q / t2;
      } else {
        t1 = b - root;
        t2 = t1 != 0.0 ? q / t1 : 0.0;
      }
      if (t1 > 0.0 && t1 <= 1.0) events.emplace_back(t1, i);
      if (t2 > 0.0 && t2 <= 1.0 && t2 != t1) events.emplace_back(t2, i);
    }
    if (events.empty()) continue;
    std::sort(events.begin(), events.end());
    radii[k] = events.front().first;
    // The ray can only re-enter the origin's face where every circle crossed
    // so far has been crossed back.
    int differing = 0;
    bool flag = false;
    for (const auto& [t, i] : events) {
      flipped[i] ^= 1;
      differing += flipped[i] ? 1 : -1;
      if (differing == 0) flag = true;
    }
    for (const auto& e : events) flipped[e.second] = 0;
    if (flag) ++flagged;
  }

  auto shared_centers = std::make_shared<const ProcessSample>(centers);
  StarSet cell(2, [shared_centers](const Direction& theta) {
    double r = 1.0;
    const auto th = theta.coords();
    for (std::size_t i = 0; i < shared_centers->size(); ++i) {
      const auto x = shared_centers->point(i);
      const double b = dot(th, x);
      const double q = norm2(x) - 1.0;
      const double disc = b * b - q;
      if (disc < 0.0) continue;
      const double root = std::sqrt(disc);
      const double t2 = b + root;
      const double t1 = t2 > 0.0 ? q / t2 : b - root;
      if (t1 > 0.0) r = std::min(r, t1);
      else if (t2 > 0.0) r = std::min(r, t2);
    }
    return r;
  });
  const double rate = static_cast<double>(flagged) / static_cast<double>(grid.size());
  return SphereCell{std::move(cell), std::move(radii), rate};
}

CouplingOutput coupling_transform(const ProcessSample& tess_sample, double eps, RngStream& rng,
                                  std::size_t grid_size) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("coupling_transform: eps outside (0, 1)");
  if (tess_sample.dim() != 2) throw UnsupportedConfiguration("coupling_transform: d must be 2");
  const double lambda = 2.0 * tess_sample.lambda();
  const ShellTransport transport(2, eps);

  std::vector<double> shifted;
  std::vector<double> moved;
  shifted.reserve(tess_sample.coords().size());
  moved.reserve(tess_sample.coords().size());
  for (std::size_t i = 0; i < tess_sample.size(); ++i) {
    const auto x = tess_sample.point(i);
    const double s = tess_sample.norm(i);
    const double ux = x[0] / s;
    const double uy = x[1] / s;
    const bool inner = s < 1.0;
    const double w = std::clamp(inner ? 1.0 - s : s - 1.0, 0.0, eps);
    const double sign = inner ? 1.0 : -1.0;
    if (inner) {
      shifted.push_back(x[0]);
      shifted.push_back(x[1]);
    } else {
      shifted.push_back((s - 2.0) * ux);
      shifted.push_back((s - 2.0) * uy);
    }
    const double r = 1.0 - transport.to_inner(w);
    moved.push_back(sign * r * ux);
    moved.push_back(sign * r * uy);
  }

  const ProcessSample bulk = sample_ball(2, lambda, 1.0 - eps, rng);
  auto all = std::make_shared<ProcessSample>(2, lambda, Region::Ball, 1.0, rng.seed(),
                                             rng.stream_id());
  all->reserve(moved.size() / 2 + bulk.size());
  for (std::size_t i = 0; i < moved.size(); i += 2)
    all->push_back(std::span<const double>(moved).subspan(i, 2));
  for (std::size_t i = 0; i < bulk.size(); ++i) all->push_back(bulk.point(i));
  StarSet full = intersection_from_sample(BallShape{}, std::move(all));

  const DirectionGrid grid = direction_grid(2, grid_size);
  std::vector<double> i_eps(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    i_eps[k] = ball_intersection_radius(2, moved, grid[k].coords());
  SphereCell j = sphere_tessellation_cell_2d(tess_sample, grid);
  const double dh = hausdorff_star(i_eps, j.radii);

  return CouplingOutput{tess_sample,      std::move(shifted), std::move(moved),
                        std::move(full),  std::move(j.cell),  std::move(i_eps),
                        std::move(j.radii), lambda * dh,      j.diagnostic_rate,
                        bulk.size()};
}

std::pair<double, double> warmup_1d(double lambda, RngStream& rng) {
  if (!(lambda >= 0.0)) throw DomainError("warmup_1d: negative intensity");
  const std::uint64_t n = sample_poisson_count(2.0 * lambda, rng);
  double lo = -1.0;
  double hi = 1.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double c = 2.0 * rng.uniform() - 1.0;
    lo = std::max(lo, c - 1.0);
    hi = std::min(hi, c + 1.0);
  }
  return {lo, hi};
}

namespace {

void check_meeting_args(int d, double lambda, double eps) {
  if (d < 1) throw DomainError("meeting_count: dimension must be >= 1");
  if (!(lambda >= 0.0)) throw DomainError("meeting_count: negative intensity");
  if (!(eps > 0.0 && eps <= 0.01)) throw DomainError("meeting_count: eps outside (0, 0.01]");
}

}  // namespace

std::uint64_t meeting_count(MeetingModel model, int d, double lambda, double eps, RngStream& rng) {
  check_meeting_args(d, lambda, eps);
  // Sample a window three times wider than the meeting zone and count.
  const double window = 3.0 * eps;
  std::uint64_t count = 0;
  switch (model) {
    case MeetingModel::Boolean: {
      // Uncovered origin: centers live outside B; X + B meets B_eps iff |X| < 1 + eps.
      const ProcessSample s = sample_shell(d, lambda, window, ShellSide::Outer, rng);
      for (std::size_t i = 0; i < s.size(); ++i) count += s.norm(i) < 1.0 + eps;
      break;
    }
    case MeetingModel::SphereTess: {
      const ProcessSample s = sample_shell(d, lambda, window, ShellSide::Both, rng);
      for (std::size_t i = 0; i < s.size(); ++i) count += std::abs(s.norm(i) - 1.0) < eps;
      break;
    }
    case MeetingModel::HyperplaneTess: {
      const std::uint64_t n = sample_poisson_count(2.0 * lambda * window, rng);
      for (std::uint64_t i = 0; i < n; ++i) {
        const double r = window * (2.0 * rng.uniform() - 1.0);
        count += std::abs(r) < eps;
      }
      break;
    }
  }
  return count;
}

Estimate count_meeting_origin_ball(MeetingModel model, int d, double lambda, double eps,
                                   std::size_t replicates, RngStream& rng) {
  if (replicates == 0) throw DomainError("count_meeting_origin_ball: replicates must be >= 1");
  std::vector<double> counts(replicates);
  for (auto& c : counts) c = static_cast<double>(meeting_count(model, d, lambda, eps, rng));
  return mean_estimate(counts);
}

double meeting_count_mean(MeetingModel model, int d, double lambda, double eps) {
  check_meeting_args(d, lambda, eps);
  const double w = unit_ball_volume(d);
  switch (model) {
    case MeetingModel::Boolean:
      return lambda * w * std::expm1(d * std::log1p(eps));
    case MeetingModel::SphereTess:
      return lambda * w * (std::pow(1.0 + eps, d) - std::pow(1.0 - eps, d));
    case MeetingModel::HyperplaneTess:
      return 2.0 * lambda * eps;
  }
  return 0.0;
}

}  // namespace randset
