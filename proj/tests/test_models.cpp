#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "randset/analytics.hpp"
#include "randset/error.hpp"
#include "randset/models.hpp"
#include "randset/summary.hpp"

using namespace randset;
using std::numbers::pi;

namespace {

ProcessSample points2(const std::vector<std::pair<double, double>>& pts) {
  ProcessSample s(2, 1.0, Region::Ball, 1.0, 0, 0);
  for (const auto& [x, y] : pts) {
    const double c[2] = {x, y};
    s.push_back(c);
  }
  return s;
}

const Direction e1 = Direction::axis(2, 0);
const Direction e2 = Direction::axis(2, 1);

}  // namespace

TEST_SUITE("models") {
  TEST_CASE("ball intersection radius examples") {
    CHECK(ball_intersection_radius(points2({}), e1) == 1.0);
    const auto origin = points2({{0.0, 0.0}});
    const auto g16 = direction_grid(2, 16);
    for (const auto& t : g16.points())
      CHECK(ball_intersection_radius(origin, t) == doctest::Approx(1.0));
    const auto half = points2({{0.5, 0.0}});
    CHECK(ball_intersection_radius(half, Direction::axis(2, 0, -1.0)) == doctest::Approx(0.5));
    CHECK(ball_intersection_radius(half, e1) == doctest::Approx(1.0));
    const std::vector<double> outside{1.2, 0.0};
    CHECK_THROWS_AS(ball_intersection_radius(2, outside, e1.coords()), DomainError);
  }

  TEST_CASE("half-space intersection radius examples") {
    CHECK(halfspace_intersection_radius({}, e1) == 1.0);
    const std::vector<HalfSpace> one{HalfSpace(e1, 0.3)};
    CHECK(halfspace_intersection_radius(one, e1) == doctest::Approx(0.3));
    CHECK(halfspace_intersection_radius(one, e2) == doctest::Approx(1.0));
    const std::vector<HalfSpace> two{HalfSpace(e1, 0.3), HalfSpace(e2, 0.4)};
    const Direction diag({1.0, 1.0});
    CHECK(halfspace_intersection_radius(two, diag) == doctest::Approx(0.3 * std::sqrt(2.0)));
    CHECK_THROWS_AS(HalfSpace(e1, 0.0), DomainError);
    CHECK_THROWS_AS(HalfSpace(e1, -0.2), DomainError);
  }

  TEST_CASE("build intersection") {
    RngStream rng(21, 0);
    const StarSet empty = build_intersection(2, 0.0, rho_measure(2), BallShape{}, rng);
    const auto g32 = direction_grid(2, 32);
    for (const auto& t : g32.points()) CHECK(empty.radius(t) == 1.0);
    CHECK_THROWS_AS(build_intersection(3, 10.0, rho_measure(3), ConeShape{1.0}, rng),
                    UnsupportedConfiguration);
    CHECK_THROWS_AS(build_intersection(2, 10.0, rho_measure(2), ConeShape{4.0}, rng), DomainError);
  }

  TEST_CASE("cone at a right angle is the half-space") {
    RngStream rng(22, 0);
    const auto g8 = direction_grid(2, 8);
    for (int i = 0; i < 200; ++i) {
      double c[2];
      const double s = std::sqrt(rng.uniform());
      const double phi = 2.0 * pi * rng.uniform();
      c[0] = s * std::cos(phi);
      c[1] = s * std::sin(phi);
      for (const auto& t : g8.points()) {
        const double h = shape_exit_time(HalfSpaceShape{}, c, t.coords());
        const double k = shape_exit_time(ConeShape{pi / 2}, c, t.coords());
        if (std::isinf(h)) CHECK(k > 1e12);
        else CHECK(k == doctest::Approx(h).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("uniform centers with half-spaces: radius law") {
    // Centers c excluding r e_1 fill the disk on the diameter [0, r e_1].
    RngStream rng(23, 0);
    const double lambda = 50.0;
    const int n = 20000;
    std::vector<double> q(n);
    for (auto& v : q) v = sample_model_radius(2, lambda, rho_measure(2), HalfSpaceShape{}, rng);
    const double D = ks_statistic(q, [lambda](double r) {
      return 1.0 - std::exp(-lambda * pi * r * r / 4.0);
    });
    CHECK(D < 1.95 / std::sqrt(n));
  }

  TEST_CASE("membership against the generating centers") {
    RngStream rng(24, 0);
    auto sample = std::make_shared<const ProcessSample>(
        sample_product_process(2, 30.0, rho_measure(2), rng));
    const StarSet s = intersection_from_sample(BallShape{}, sample);
    const double origin[2] = {0.0, 0.0};
    CHECK(membership(s, origin));
    int agree = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const double r = std::sqrt(rng.uniform());
      const double phi = 2.0 * pi * rng.uniform();
      const double x[2] = {r * std::cos(phi), r * std::sin(phi)};
      bool brute = true;
      for (std::size_t k = 0; k < sample->size(); ++k) {
        const auto c = sample->point(k);
        if (std::hypot(x[0] - c[0], x[1] - c[1]) > 1.0) brute = false;
      }
      agree += membership(s, x) == brute;
    }
    CHECK(agree == n);
    const double far[2] = {1.5, 0.0};
    CHECK_THROWS_AS(membership(s, far), DomainError);
  }

  TEST_CASE("unit boundary point outside a shrunken direction") {
    const auto sample = std::make_shared<const ProcessSample>(points2({{-0.5, 0.0}}));
    const StarSet s = intersection_from_sample(BallShape{}, sample);
    const double x[2] = {1.0, 0.0};
    CHECK(s.radius(e1) == doctest::Approx(0.5));
    CHECK_FALSE(membership(s, x));
  }

  TEST_CASE("exact radius laws") {
    struct Case {
      int d;
      double lambda;
      bool ball;
    };
    for (const Case c : {Case{2, 50.0, true}, Case{3, 200.0, true}, Case{2, 200.0, false},
                         Case{3, 50.0, false}}) {
      RngStream rng(25, static_cast<std::uint64_t>(c.d * 1000 + c.lambda + c.ball));
      const int n = 4000;
      std::vector<double> R(n);
      for (auto& v : R)
        v = c.ball ? sample_model_radius(c.d, c.lambda, rho_measure(c.d), BallShape{}, rng)
                   : sample_model_radius(c.d, c.lambda, nu_hat_measure(c.d), HalfSpaceShape{}, rng);
      const double scale = c.lambda * unit_ball_volume(c.d);
      const RadiusLaw law(c.d, c.lambda, c.ball ? RealMap([d = c.d](double r) { return lune_fraction(d, r); })
                                                : RealMap([d = c.d](double r) { return g_sum(d, r); }));
      // Quantiles of the limit law keep each probe informative.
      for (double z : {0.25, 0.7, 1.4, 2.5}) {
        const double r = invert_increasing([&](double t) { return law.F(t); }, z / scale);
        const double p = std::exp(-z);
        double hits = 0;
        for (double v : R) hits += v > r;
        CHECK(std::abs(hits / n - p) < 3.0 * std::sqrt(p * (1 - p) / n));
      }
    }
  }

  TEST_CASE("adding centers never increases the radius") {
    RngStream rng(26, 0);
    const auto grid = direction_grid(2, 256);
    ProcessSample s(2, 1.0, Region::Ball, 1.0, 0, 0);
    std::vector<double> prev(grid.size(), 1.0);
    for (int k = 0; k < 40; ++k) {
      const double r = std::sqrt(rng.uniform());
      const double phi = 2.0 * pi * rng.uniform();
      const double c[2] = {r * std::cos(phi), r * std::sin(phi)};
      s.push_back(c);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double now = ball_intersection_radius(s, grid[i]);
        CHECK(now <= prev[i]);
        prev[i] = now;
      }
    }
  }

  TEST_CASE("half-space model is convex") {
    RngStream rng(27, 0);
    const auto grid = direction_grid(2, 64);
    const StarSet k = build_intersection(2, 20.0, nu_hat_measure(2), HalfSpaceShape{}, rng);
    std::vector<std::pair<double, double>> pts;
    for (const auto& t : grid.points()) {
      const double r = k.radius(t);
      pts.emplace_back(r * t[0], r * t[1]);
    }
    for (const auto& a : pts)
      for (const auto& b : pts) {
        const double m[2] = {0.5 * (a.first + b.first) * (1 - 1e-9),
                             0.5 * (a.second + b.second) * (1 - 1e-9)};
        CHECK(k.contains(m));
      }
  }

  TEST_CASE("antipodal radii are uncorrelated") {
    RngStream rng(28, 0);
    const int n = 5000;
    std::vector<double> a(n), b(n);
    const Direction minus = Direction::axis(2, 0, -1.0);
    for (int i = 0; i < n; ++i) {
      const ProcessSample s = sample_product_process(2, 50.0, rho_measure(2), rng);
      a[i] = ball_intersection_radius(s, e1);
      b[i] = ball_intersection_radius(s, minus);
    }
    CHECK(std::abs(pearson_correlation(a, b)) < 3.0 / std::sqrt(n));
  }

  TEST_CASE("radius law is rotation invariant") {
    RngStream rng(29, 0);
    const int n = 5000;
    const Direction t({0.3, -0.7});
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      const ProcessSample s = sample_product_process(2, 50.0, rho_measure(2), rng);
      a[i] = ball_intersection_radius(s, e1);
      const ProcessSample s2 = sample_product_process(2, 50.0, rho_measure(2), rng);
      b[i] = ball_intersection_radius(s2, t);
    }
    CHECK(ks_two_sample_pvalue(a, b) > 0.001);
  }

  TEST_CASE("zero cell of four lines is a square") {
    std::vector<HalfSpace> planes{HalfSpace(e1, 1.0), HalfSpace(Direction::axis(2, 0, -1.0), 1.0),
                                  HalfSpace(e2, 1.0), HalfSpace(Direction::axis(2, 1, -1.0), 1.0)};
    const CroftonCell c = zero_cell_from_planes(2, planes, 10.0);
    CHECK(c.volume == doctest::Approx(4.0));
    CHECK(c.polygon.size() == 4);
    CHECK(c.cell.radius(Direction({1.0, 1.0})) == doctest::Approx(std::sqrt(2.0)));
    CHECK(polygon_area(c.polygon) == doctest::Approx(4.0));
    CHECK(vertices_in_disk(planes, 10.0) == 4);
    CHECK(vertices_in_disk(planes, 1.2) == 0);

    planes.pop_back();
    CHECK_THROWS_AS(zero_cell_from_planes(2, planes, 10.0), UnboundedCell);
    CHECK_THROWS_AS(zero_cell_from_planes(2, {}, 10.0), UnboundedCell);
  }

  TEST_CASE("zero cell of six planes is a cube") {
    std::vector<HalfSpace> planes;
    for (int k = 0; k < 3; ++k)
      for (double s : {1.0, -1.0}) planes.emplace_back(Direction::axis(3, k, s), 0.5);
    const CroftonCell c = zero_cell_from_planes(3, planes, 10.0, 20000);
    CHECK(c.volume == doctest::Approx(1.0).epsilon(0.03));
  }

  TEST_CASE("crofton cell sampling") {
    RngStream rng(30, 0);
    CHECK_THROWS_AS(crofton_cell(2, HyperplaneNormalization::ball_rate_two(), 5.0, rng),
                    DomainError);
    CHECK_THROWS_AS(crofton_cell(2, HyperplaneNormalization::custom(1e-9), 10.0, rng, 0),
                    UnboundedCell);
    const CroftonCell c = crofton_cell(2, HyperplaneNormalization::ball_rate_two(), 10.0, rng);
    CHECK(c.volume > 0.0);
    CHECK(c.volume == doctest::Approx(polygon_area(c.polygon)));
  }

  TEST_CASE("segment crossings") {
    RngStream rng(31, 0);
    for (double rate : {2.0, 2.0 * pi}) {
      const int n = 20000;
      std::vector<double> x(n);
      for (auto& v : x)
        v = static_cast<double>(segment_crossings(1.5, HyperplaneNormalization::custom(rate), rng));
      const double want = rate * 1.5 / pi;
      CHECK(std::abs(mean_estimate(x).value - want) < 3.0 * std::sqrt(want / n));
    }
  }

  TEST_CASE("sphere tessellation cell") {
    const auto grid = direction_grid(2, 4);
    const SphereCell none = sphere_tessellation_cell_2d(points2({}), grid);
    for (double r : none.radii) CHECK(r == 1.0);
    const SphereCell one = sphere_tessellation_cell_2d(points2({{1.5, 0.0}}), grid);
    CHECK(one.radii[0] == doctest::Approx(0.5));
    CHECK(one.radii[2] == 1.0);
    CHECK(one.cell.radius(e1) == doctest::Approx(0.5));
    CHECK(one.diagnostic_rate == 0.0);
  }

  TEST_CASE("coupling transform") {
    ProcessSample tess(2, 500.0, Region::Annulus, 0.02, 0, 0);
    const double outer[2] = {1.01, 0.0};
    const double inner[2] = {0.0, 0.99};
    tess.push_back(outer);
    tess.push_back(inner);
    RngStream rng(32, 0);
    const CouplingOutput out = coupling_transform(tess, 0.02, rng, 256);
    REQUIRE(out.shifted_points.size() == 4);
    CHECK(out.shifted_points[0] == doctest::Approx(-0.99));
    CHECK(out.shifted_points[1] == doctest::Approx(0.0));
    CHECK(out.shifted_points[2] == 0.0);
    CHECK(out.shifted_points[3] == 0.99);
    CHECK(out.transported_points.size() == 4);
    for (std::size_t i = 0; i < out.transported_points.size(); i += 2)
      CHECK(std::hypot(out.transported_points[i], out.transported_points[i + 1]) <= 1.0);
    CHECK(out.hausdorff_scaled >= 0.0);

    RngStream rng2(33, 0);
    const ProcessSample shell = sample_shell(2, 1500.0, 0.02, ShellSide::Both, rng2);
    const CouplingOutput big = coupling_transform(shell, 0.02, rng2, 512);
    CHECK(big.shifted_points.size() == 2 * shell.size());
    for (std::size_t i = 0; i < big.shifted_points.size(); i += 2)
      CHECK(std::hypot(big.shifted_points[i], big.shifted_points[i + 1]) < 1.0);
    CHECK_THROWS_AS(coupling_transform(shell, 1.5, rng2), DomainError);
  }

  TEST_CASE("one-dimensional warm-up") {
    RngStream rng(34, 0);
    const auto [lo, hi] = warmup_1d(0.0, rng);
    CHECK(lo == -1.0);
    CHECK(hi == 1.0);
    for (int i = 0; i < 100; ++i) {
      const auto [a, b] = warmup_1d(50.0, rng);
      CHECK(a <= 0.0);
      CHECK(b >= 0.0);
    }
  }

  TEST_CASE("meeting counts") {
    RngStream rng(35, 0);
    const double lambda = 1e4, eps = 1e-3;
    CHECK(meeting_count_mean(MeetingModel::Boolean, 2, lambda, eps) ==
          doctest::Approx(2.0 * pi * lambda * eps).epsilon(1e-3));
    CHECK(meeting_count_mean(MeetingModel::HyperplaneTess, 2, lambda, eps) ==
          doctest::Approx(2.0 * lambda * eps));
    CHECK(meeting_count_mean(MeetingModel::SphereTess, 2, lambda, eps) ==
          doctest::Approx(4.0 * pi * lambda * eps).epsilon(1e-6));
    for (auto m : {MeetingModel::Boolean, MeetingModel::HyperplaneTess, MeetingModel::SphereTess}) {
      const Estimate e = count_meeting_origin_ball(m, 2, lambda, eps, 3000, rng);
      CHECK(std::abs(e.value - meeting_count_mean(m, 2, lambda, eps)) < 3.0 * e.std_error);
    }
    CHECK_THROWS_AS(meeting_count(MeetingModel::Boolean, 2, lambda, 0.1, rng), DomainError);
  }
}
