#include "randset/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "randset/analytics.hpp"
#include "randset/error.hpp"
#include "randset/geomcore.hpp"
#include "randset/models.hpp"
#include "randset/ppp.hpp"

namespace randset {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& text, int line) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError(key, "expected a real number, got '" + t + "'", line);
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text, int line) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError(key, "expected a nonnegative integer, got '" + t + "'", line);
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text, int line) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item, line));
  if (out.empty()) throw ConfigError(key, "empty list", line);
  return out;
}

bool parse_bool(const std::string& key, const std::string& text, int line) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + t + "'", line);
}

// Collects records for one run.
class Recorder {
 public:
  explicit Recorder(const ExperimentConfig& cfg) : cfg_(cfg) {}

  void add(double lambda, long long replicate, const std::string& metric, double value,
           double std_error = kNaN) {
    if (!std::isfinite(value))
      throw NumericalFailure(cfg_.experiment + ": non-finite value for " + metric);
    records_.push_back({cfg_.experiment, cfg_.d, lambda, replicate, cfg_.seed, metric, value,
                        std_error, kNaN});
  }
  void add(double lambda, const std::string& metric, const Estimate& e) {
    add(lambda, -1, metric, e.value, e.std_error);
  }

  // Stamps the aggregate records added since `from` with the block runtime.
  void stamp(std::size_t from, double ms) {
    if (!cfg_.timing) return;
    for (std::size_t i = from; i < records_.size(); ++i)
      if (records_[i].replicate < 0) records_[i].runtime_ms = ms;
  }

  std::size_t size() const { return records_.size(); }
  std::vector<ExperimentRecord> take() { return std::move(records_); }

 private:
  const ExperimentConfig& cfg_;
  std::vector<ExperimentRecord> records_;
};

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

RngStream stream(const ExperimentConfig& cfg, std::string_view tag, std::uint64_t index,
                 std::uint64_t replicate) {
  return RngStream(cfg.seed, derive_stream(cfg.experiment + std::string(tag), index, replicate));
}

Estimate binomial_estimate(std::size_t hits, std::size_t n) {
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

Estimate scaled(const Estimate& e, double s) { return {e.value * s, e.std_error * s}; }

// Variance of the sample with the large-sample standard error sqrt((m4 - s^4) / n).
Estimate variance_estimate(std::span<const double> x) {
  const auto n = static_cast<double>(x.size());
  const double mean = pairwise_sum(x) / n;
  std::vector<double> c2(x.size()), c4(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = x[i] - mean;
    c2[i] = c * c;
    c4[i] = c2[i] * c2[i];
  }
  const double m2 = pairwise_sum(c2) / n;
  const double m4 = pairwise_sum(c4) / n;
  return {m2 * n / (n - 1.0), std::sqrt(std::max(0.0, m4 - m2 * m2) / n)};
}

// mean(x) * mean(y) with a delta-method standard error.
Estimate product_of_means(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n;
  const double my = pairwise_sum(y) / n;
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = (x[i] - mx) * (x[i] - mx);
    yy[i] = (y[i] - my) * (y[i] - my);
    xy[i] = (x[i] - mx) * (y[i] - my);
  }
  const double var = (my * my * pairwise_sum(xx) + mx * mx * pairwise_sum(yy) +
                      2.0 * mx * my * pairwise_sum(xy)) /
                     ((n - 1.0) * n);
  return {mx * my, std::sqrt(std::max(0.0, var))};
}

std::string tagged(const std::string& metric, double beta, double r = kNaN) {
  std::string s = metric + "(beta=" + format_number(beta);
  if (!std::isnan(r)) s += ";r=" + format_number(r);
  return s + ")";
}

// ---------------------------------------------------------------------------

void run_radius_convergence(const ExperimentConfig& cfg, Recorder& rec) {
  const int d = cfg.d;
  const std::size_t n = cfg.samples;
  for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
    const double lambda = cfg.lambdas[li];
    const Stopwatch clock;
    const std::size_t first = rec.size();
    for (int model = 0; model < 2; ++model) {
      const bool ball = model == 0;
      const std::string tag = ball ? "ball" : "halfspace";
      const RealMap F = ball ? RealMap([d](double r) { return lune_fraction(d, r); })
                             : RealMap([d](double r) { return g_sum(d, r); });
      const RadialMeasure mu = ball ? rho_measure(d) : nu_hat_measure(d);
      const ShapeKind shape = ball ? ShapeKind(BallShape{}) : ShapeKind(HalfSpaceShape{});
      const RadiusLaw law(d, lambda, F);
      const std::uint64_t key = 2 * li + static_cast<std::uint64_t>(model);

      const auto process = map_replicates(
          n,
          [&](std::size_t i) {
            RngStream rng = stream(cfg, "/process", key, i);
            return sample_model_radius(d, lambda, mu, shape, rng);
          },
          cfg.execution);
      const auto exact = map_replicates(
          n,
          [&](std::size_t i) {
            RngStream rng = stream(cfg, "/exact", key, i);
            return law.sample(rng);
          },
          cfg.execution);

      const double cap = law.scale() * law.F_at_one();
      auto transform = [&](const std::vector<double>& radii, std::size_t& atoms,
                           std::size_t& over) {
        std::vector<double> z(radii.size());
        atoms = over = 0;
        for (std::size_t i = 0; i < radii.size(); ++i) {
          z[i] = law.scale() * F(radii[i]);
          atoms += radii[i] >= 1.0;
          over += z[i] > cap * (1.0 + 1e-12);
        }
        return z;
      };
      std::size_t atoms_p = 0, over_p = 0, atoms_e = 0, over_e = 0;
      const auto zp = transform(process, atoms_p, over_p);
      const auto ze = transform(exact, atoms_e, over_e);
      const RealMap exp_cdf = [](double z) { return -std::expm1(-std::max(0.0, z)); };

      rec.add(lambda, -1, "ks_exp1_process_" + tag, ks_statistic(zp, exp_cdf));
      rec.add(lambda, -1, "ks_exp1_exact_" + tag, ks_statistic(ze, exp_cdf));
      rec.add(lambda, -1, "ks_two_sample_stat_" + tag, ks_two_sample_statistic(zp, ze));
      rec.add(lambda, -1, "ks_two_sample_p_" + tag, ks_two_sample_pvalue(zp, ze));
      rec.add(lambda, -1, "ks_critical_0.001_" + tag, 1.95 / std::sqrt(static_cast<double>(n)));
      rec.add(lambda, -1, "truncation_violations_" + tag, static_cast<double>(over_p + over_e));
      rec.add(lambda, "atom_frequency_process_" + tag, binomial_estimate(atoms_p, n));
      rec.add(lambda, -1, "atom_probability_" + tag, std::exp(-cap));
    }
    rec.stamp(first, clock.ms());
  }
}

void run_volume_sweep(const ExperimentConfig& cfg, Recorder& rec) {
  const int d = cfg.d;
  const double target = asymptotic_volume_constant(d);
  const RealMap F = [d](double r) { return lune_fraction(d, r); };
  for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
    const double lambda = cfg.lambdas[li];
    const double s = std::pow(lambda, d);
    const Stopwatch clock;
    const std::size_t first = rec.size();
    rec.add(lambda, -1, "target_constant", target);
    rec.add(lambda, -1, "quadrature_scaled", s * expected_volume_quadrature(d, lambda, F));

    // Process simulation while a realization stays cheap; the exact sampler beyond.
    const bool simulate = lambda * unit_ball_volume(d) <= 8000.0;
    const RadiusLaw law(d, lambda, F);
    const auto radii = map_replicates(
        cfg.replicates,
        [&](std::size_t i) {
          RngStream rng = stream(cfg, "/radius", li, i);
          return simulate ? sample_model_radius(d, lambda, rho_measure(d), BallShape{}, rng)
                          : law.sample(rng);
        },
        cfg.execution);
    rec.add(lambda, simulate ? "radius_moment_process_scaled" : "radius_moment_exact_scaled",
            scaled(radius_moment_volume(d, radii), s));

    if (lambda * unit_ball_volume(d) <= 1000.0) {
      const std::size_t reps = std::min<std::size_t>(cfg.replicates, 4000);
      const auto hm = map_replicates(
          reps,
          [&](std::size_t i) {
            RngStream rng = stream(cfg, "/hit-or-miss", li, i);
            return hit_or_miss_volume(d, lambda, cfg.samples, rng);
          },
          cfg.execution);
      rec.add(lambda, "hit_or_miss_scaled", scaled(mean_estimate(hm), s));
    }

    if (d == 2) {
      // Half-space copies with uniform centers: P(Q > r) = exp(-lambda pi r^2 / 4).
      const RealMap F1 = [](double r) { return 0.25 * r * r; };
      rec.add(lambda, -1, "rho_halfspace_target", 4.0 / std::numbers::pi);
      rec.add(lambda, -1, "rho_halfspace_quadrature_scaled",
              lambda * expected_volume_quadrature(2, lambda, F1));
      const RadiusLaw law1(2, lambda, F1);
      const auto q = map_replicates(
          cfg.replicates,
          [&](std::size_t i) {
            RngStream rng = stream(cfg, "/rho-halfspace", li, i);
            return simulate ? sample_model_radius(2, lambda, rho_measure(2), HalfSpaceShape{}, rng)
                            : law1.sample(rng);
          },
          cfg.execution);
      rec.add(lambda, simulate ? "rho_halfspace_mc_process_scaled" : "rho_halfspace_mc_exact_scaled",
              scaled(radius_moment_volume(2, q), lambda));
    }
    rec.stamp(first, clock.ms());
  }
}

void run_coupling(const ExperimentConfig& cfg, Recorder& rec) {
  const DirectionGrid probe = direction_grid(2, 1024);
  struct Rep {
    double dh = 0.0;
    double diag = 0.0;
    bool contained = false;
    bool all_arcs = false;
  };
  for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
    const double lambda = cfg.lambdas[li];
    const double log_l = std::log(lambda);
    const double eps = log_l * log_l / (2.0 * lambda);
    const double eps_full = 2.0 * eps;
    if (!(eps < 0.5)) throw DomainError("coupling: lambda too small for eps < 1/2");
    const Stopwatch clock;
    const std::size_t first = rec.size();

    const auto reps = map_replicates(
        cfg.replicates,
        [&](std::size_t i) {
          Rep r;
          RngStream rng = stream(cfg, "", li, i);
          const ProcessSample tess = sample_shell(2, 0.5 * lambda, eps, ShellSide::Both, rng);
          const CouplingOutput out = coupling_transform(tess, eps, rng, cfg.grid_size);
          r.dh = out.hausdorff_scaled;
          r.diag = out.diagnostic_rate;

          // Centers deeper than 4 eps_full leave B_{4 eps_full} inside their ball, so the
          // inner shell of that width decides I within B_{2 eps_full} exactly.
          RngStream rng2 = stream(cfg, "/containment", li, i);
          const double width = std::min(4.0 * eps_full, 0.999);
          const ProcessSample inner = sample_shell(2, lambda, width, ShellSide::Inner, rng2);
          double max_r = 0.0;
          for (const auto& theta : probe.points())
            max_r = std::max(max_r, ball_intersection_radius(inner, theta));
          r.contained = max_r < 2.0 * eps_full;

          bool seen[6] = {false, false, false, false, false, false};
          for (std::size_t k = 0; k < inner.size(); ++k) {
            if (inner.norm(k) <= 1.0 - eps_full) continue;
            const auto x = inner.point(k);
            double phi = std::atan2(x[1], x[0]);
            if (phi < 0.0) phi += 2.0 * std::numbers::pi;
            seen[std::min(5, static_cast<int>(phi / (std::numbers::pi / 3.0)))] = true;
          }
          r.all_arcs = std::all_of(std::begin(seen), std::end(seen), [](bool b) { return b; });
          return r;
        },
        cfg.execution);

    std::vector<double> dh(reps.size()), diag(reps.size());
    std::size_t contained = 0, arcs = 0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      dh[i] = reps[i].dh;
      diag[i] = reps[i].diag;
      contained += reps[i].contained;
      arcs += reps[i].all_arcs;
      rec.add(lambda, static_cast<long long>(i), "hausdorff_scaled", dh[i]);
    }
    rec.add(lambda, -1, "eps", eps);
    rec.add(lambda, -1, "median_hausdorff_scaled", quantile(dh, 0.5));
    rec.add(lambda, -1, "p90_hausdorff_scaled", quantile(dh, 0.9));
    rec.add(lambda, "diagnostic_rate", mean_estimate(diag));
    rec.add(lambda, -1, "diagnostic_rate_max", *std::max_element(diag.begin(), diag.end()));
    rec.add(lambda, "shell_containment_rate", binomial_estimate(contained, reps.size()));
    rec.add(lambda, "arc_occupancy_rate", binomial_estimate(arcs, reps.size()));
    rec.add(lambda, -1, "arc_occupancy_lower_bound",
            1.0 - coupon_bound(6, 1.0 / 6.0, lambda) - 1.0 / lambda);
    rec.stamp(first, clock.ms());
  }
}

void run_crofton(const ExperimentConfig& cfg, Recorder& rec) {
  const int d = cfg.d;
  const GoudsmitConstants g = goudsmit_constants(d);
  struct Cell {
    double volume = 0.0;
    bool bounded = false;
    double vertices = 0.0;
  };
  for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
    const double lambda = cfg.lambdas[li];
    const double unit = std::pow(lambda, -d);
    const Stopwatch clock;
    const std::size_t first = rec.size();
    const HyperplaneNormalization norm = HyperplaneNormalization::custom(2.0 * lambda);
    const double window = std::max(10.0, 10.0 / lambda);

    const auto cells = map_replicates(
        cfg.replicates,
        [&](std::size_t i) {
          RngStream rng = stream(cfg, "", li, i);
          try {
            const CroftonCell c = crofton_cell(d, norm, window, rng, 3, cfg.grid_size);
            const double v = d == 2 ? static_cast<double>(vertices_in_disk(c.planes, window)) : 0.0;
            return Cell{c.volume, true, v};
          } catch (const UnboundedCell&) {
            return Cell{0.0, false, 0.0};
          }
        },
        cfg.execution);
    std::vector<double> v, inv, intensity;
    const double disk = std::numbers::pi * window * window;
    for (const auto& c : cells)
      if (c.bounded) {
        v.push_back(c.volume);
        inv.push_back(1.0 / c.volume);
        intensity.push_back(c.vertices / disk);
      }
    rec.add(lambda, -1, "unbounded_cells", static_cast<double>(cells.size() - v.size()));
    if (v.size() >= 2) {
      rec.add(lambda, "zero_cell_mean", mean_estimate(v));
      rec.add(lambda, -1, "zero_cell_mean_target", g.zero_cell_mean * unit);
      if (d == 2) {
        // Cells and vertices of a line tessellation share one intensity, 1 / E(V).
        rec.add(lambda, "cell_intensity", mean_estimate(intensity));
        rec.add(lambda, -1, "cell_intensity_target", 1.0 / (g.mean_typical * unit));
        rec.add(lambda, "moment_ratio", product_of_means(v, intensity));
      }
      rec.add(lambda, "moment_ratio_inverse_mean", product_of_means(v, inv));
      rec.add(lambda, -1, "moment_ratio_target", g.moment_ratio);
      const Estimate m_inv = mean_estimate(inv);
      rec.add(lambda, -1, "typical_cell_mean", 1.0 / m_inv.value,
              m_inv.std_error / (m_inv.value * m_inv.value));
      rec.add(lambda, -1, "typical_cell_mean_target", g.mean_typical * unit);
    }
    if (d == 2) {
      // Lines parametrized by (angle, distance) with Lebesgue measure: rate 2 pi.
      const double l = 1.0;
      for (int variant = 0; variant < 2; ++variant) {
        const bool custom = variant == 0;
        const HyperplaneNormalization nz = HyperplaneNormalization::custom(
            (custom ? 2.0 * std::numbers::pi : 2.0) * lambda);
        const auto hits = map_replicates(
            cfg.replicates,
            [&](std::size_t i) {
              RngStream rng = stream(cfg, custom ? "/segment-unit" : "/segment-ball2", li, i);
              return static_cast<double>(segment_crossings(l, nz, rng));
            },
            cfg.execution);
        const std::string tag = custom ? "unit_intensity" : "ball_rate_2";
        rec.add(lambda, "segment_crossings_" + tag, mean_estimate(hits));
        rec.add(lambda, -1, "segment_crossings_target_" + tag,
                (custom ? 2.0 * l : 2.0 * l / std::numbers::pi) * lambda);
      }
    }
    rec.stamp(first, clock.ms());
  }
}

void run_warmup(const ExperimentConfig& cfg, Recorder& rec) {
  for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
    const double lambda = cfg.lambdas[li];
    const Stopwatch clock;
    const std::size_t first = rec.size();
    const auto ends = map_replicates(
        cfg.replicates,
        [&](std::size_t i) {
          RngStream rng = stream(cfg, "", li, i);
          return warmup_1d(lambda, rng);
        },
        cfg.execution);
    std::vector<double> len(ends.size()), left(ends.size()), right(ends.size());
    for (std::size_t i = 0; i < ends.size(); ++i) {
      len[i] = lambda * (ends[i].second - ends[i].first);
      left[i] = -ends[i].first;
      right[i] = ends[i].second;
    }
    const auto n = static_cast<double>(ends.size());
    rec.add(lambda, "mean_scaled_length", mean_estimate(len));
    rec.add(lambda, "var_scaled_length", variance_estimate(len));
    rec.add(lambda, -1, "endpoint_correlation", pearson_correlation(left, right),
            1.0 / std::sqrt(n));
    rec.add(lambda, -1, "target_mean", 2.0);
    rec.add(lambda, -1, "target_variance", 2.0);
    rec.stamp(first, clock.ms());
  }
}

void run_meeting_counts(const ExperimentConfig& cfg, Recorder& rec) {
  const int d = cfg.d;
  const double sd = sphere_area(d);
  for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
    const double lambda = cfg.lambdas[li];
    const Stopwatch clock;
    const std::size_t first = rec.size();
    const std::pair<MeetingModel, std::string> models[] = {
        {MeetingModel::Boolean, "boolean"},
        {MeetingModel::HyperplaneTess, "hyperplane"},
        {MeetingModel::SphereTess, "sphere"}};
    const double leading[] = {sd * lambda * cfg.eps, 2.0 * lambda * cfg.eps,
                              2.0 * sd * lambda * cfg.eps};
    for (std::size_t m = 0; m < 3; ++m) {
      const auto counts = map_replicates(
          cfg.replicates,
          [&](std::size_t i) {
            RngStream rng = stream(cfg, "/" + models[m].second, li, i);
            return static_cast<double>(meeting_count(models[m].first, d, lambda, cfg.eps, rng));
          },
          cfg.execution);
      rec.add(lambda, "mean_count_" + models[m].second, mean_estimate(counts));
      rec.add(lambda, -1, "leading_order_" + models[m].second, leading[m]);
      rec.add(lambda, -1, "exact_mean_" + models[m].second,
              meeting_count_mean(models[m].first, d, lambda, cfg.eps));
    }
    rec.stamp(first, clock.ms());
  }
}

void run_cone(const ExperimentConfig& cfg, Recorder& rec) {
  const double radii[] = {0.005, 0.01, 0.02, 0.05};
  const RadialMeasure rho = rho_measure(2);
  for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
    const double lambda = cfg.lambdas[li];
    const Stopwatch clock;
    const std::size_t first = rec.size();
    for (std::size_t bi = 0; bi < cfg.betas.size(); ++bi) {
      const double beta = cfg.betas[bi];
      const ShapeKind shape = ConeShape{beta};
      const std::uint64_t key = li * cfg.betas.size() + bi;
      for (std::size_t ri = 0; ri < std::size(radii); ++ri) {
        const double r = radii[ri];
        RngStream rng = stream(cfg, "/F", key, ri);
        const Estimate f = f_generic_mc(shape, rho, 2, r, cfg.samples, rng);
        rec.add(lambda, tagged("F_over_r", beta, r), scaled(f, 1.0 / r));
        rec.add(lambda, tagged("F_over_r2", beta, r), scaled(f, 1.0 / (r * r)));
        if (std::abs(beta - 0.5 * std::numbers::pi) < 1e-12)
          rec.add(lambda, tagged("halfspace_gap", beta, r),
                  Estimate{f.value - 0.25 * r * r, f.std_error});
      }
      const auto q = map_replicates(
          cfg.replicates,
          [&](std::size_t i) {
            RngStream rng = stream(cfg, "/volume", key, i);
            return sample_model_radius(2, lambda, rho, shape, rng);
          },
          cfg.execution);
      const Estimate vol = radius_moment_volume(2, q);
      rec.add(lambda, tagged("volume_scaled_lambda", beta), scaled(vol, lambda));
      rec.add(lambda, tagged("volume_scaled_lambda2", beta), scaled(vol, lambda * lambda));
    }
    rec.stamp(first, clock.ms());
  }
}

using Runner = void (*)(const ExperimentConfig&, Recorder&);

Runner runner_for(std::string_view name) {
  if (name == "radius-convergence") return run_radius_convergence;
  if (name == "volume-sweep") return run_volume_sweep;
  if (name == "coupling") return run_coupling;
  if (name == "crofton") return run_crofton;
  if (name == "warmup-1d") return run_warmup;
  if (name == "meeting-counts") return run_meeting_counts;
  if (name == "cone") return run_cone;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& registered_experiments() {
  static const std::vector<std::string> names = {
      "radius-convergence", "volume-sweep",   "coupling", "crofton",
      "warmup-1d",          "meeting-counts", "cone"};
  return names;
}

bool is_registered(std::string_view name) { return runner_for(name) != nullptr; }

ExperimentConfig default_config(const std::string& experiment) {
  if (!is_registered(experiment))
    throw ConfigError("experiment", "unknown experiment '" + experiment + "'");
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  if (experiment == "radius-convergence") {
    cfg.lambdas = {10, 50, 200};
    cfg.samples = 20000;
  } else if (experiment == "volume-sweep") {
    cfg.lambdas = {50, 200, 1000, 10000};
    cfg.replicates = 20000;
    cfg.samples = 32;
  } else if (experiment == "coupling") {
    cfg.lambdas = {1000, 3000, 10000};
    cfg.replicates = 200;
    cfg.grid_size = 2048;
  } else if (experiment == "crofton") {
    cfg.lambdas = {1};
    cfg.replicates = 10000;
    cfg.grid_size = 4096;
  } else if (experiment == "warmup-1d") {
    cfg.d = 1;
    cfg.lambdas = {100};
    cfg.replicates = 100000;
  } else if (experiment == "meeting-counts") {
    cfg.lambdas = {10000};
    cfg.replicates = 10000;
    cfg.eps = 1e-3;
  } else if (experiment == "cone") {
    cfg.lambdas = {1000};
    cfg.replicates = 2000;
    cfg.samples = 200000;
    const double pi = std::numbers::pi;
    cfg.betas = {pi / 6, pi / 3, pi / 2, 2 * pi / 3, 5 * pi / 6};
  }
  return cfg;
}

void set_config_field(ExperimentConfig& cfg, const std::string& key, const std::string& value,
                      int line) {
  const std::string v = trim(value);
  if (key == "experiment") {
    if (!is_registered(v)) throw ConfigError(key, "unknown experiment '" + v + "'", line);
    cfg.experiment = v;
  } else if (key == "d") {
    const auto d = parse_unsigned(key, v, line);
    if (d < 1 || d > 20) throw ConfigError(key, "dimension must be in [1, 20]", line);
    cfg.d = static_cast<int>(d);
  } else if (key == "lambda") {
    cfg.lambdas = parse_list(key, v, line);
  } else if (key == "replicates") {
    cfg.replicates = parse_unsigned(key, v, line);
  } else if (key == "samples") {
    cfg.samples = parse_unsigned(key, v, line);
  } else if (key == "seed") {
    cfg.seed = parse_unsigned(key, v, line);
  } else if (key == "grid_size") {
    cfg.grid_size = parse_unsigned(key, v, line);
  } else if (key == "out") {
    cfg.out = v;
  } else if (key == "format") {
    if (v != "csv" && v != "json") throw ConfigError(key, "format must be csv or json", line);
    cfg.format = v;
  } else if (key == "eps") {
    cfg.eps = parse_double(key, v, line);
  } else if (key == "beta") {
    cfg.betas = parse_list(key, v, line);
  } else if (key == "timing") {
    cfg.timing = parse_bool(key, v, line);
  } else {
    throw ConfigError(key, "unknown key", line);
  }
}

void apply_config_text(ExperimentConfig& cfg, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("", "expected key = value", line);
    const std::string key = trim(std::string_view(s).substr(0, eq));
    if (key.empty()) throw ConfigError("", "empty key", line);
    set_config_field(cfg, key, s.substr(eq + 1), line);
  }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str());
}

void validate(const ExperimentConfig& cfg) {
  if (!is_registered(cfg.experiment))
    throw ConfigError("experiment", "unknown experiment '" + cfg.experiment + "'");
  if (cfg.d < 1) throw ConfigError("d", "dimension must be >= 1");
  if (cfg.replicates < 1) throw ConfigError("replicates", "must be >= 1");
  if (cfg.samples < 1) throw ConfigError("samples", "must be >= 1");
  if (cfg.grid_size < 1) throw ConfigError("grid_size", "must be >= 1");
  if (cfg.lambdas.empty()) throw ConfigError("lambda", "grid must be nonempty");
  for (double l : cfg.lambdas)
    if (!(l > 0.0)) throw ConfigError("lambda", "values must be positive");
  if (cfg.format != "csv" && cfg.format != "json")
    throw ConfigError("format", "format must be csv or json");
  const std::string& e = cfg.experiment;
  if ((e == "coupling" || e == "cone") && cfg.d != 2)
    throw ConfigError("d", e + " is implemented for d = 2 only");
  if (e == "crofton" && cfg.d < 2) throw ConfigError("d", "crofton needs d >= 2");
  if (e == "coupling")
    for (double l : cfg.lambdas)
      if (!(l >= 20.0)) throw ConfigError("lambda", "coupling needs lambda >= 20");
  if (e == "meeting-counts" && !(cfg.eps > 0.0 && cfg.eps <= 0.01))
    throw ConfigError("eps", "must lie in (0, 0.01]");
  if (e == "cone") {
    if (cfg.betas.empty()) throw ConfigError("beta", "grid must be nonempty");
    for (double b : cfg.betas)
      if (!(b > 0.0 && b < std::numbers::pi)) throw ConfigError("beta", "values must lie in (0, pi)");
  }
  if ((e == "radius-convergence" || e == "volume-sweep") && cfg.d > 6)
    throw ConfigError("d", "supported for d <= 6");
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  Recorder rec(cfg);
  runner_for(cfg.experiment)(cfg, rec);
  return rec.take();
}

std::string format_number(double v) {
  if (std::isnan(v)) return {};
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records)
    os << r.experiment << ',' << r.d << ',' << format_number(r.lambda) << ',' << r.replicate << ','
       << r.seed << ',' << r.metric << ',' << format_number(r.value) << ','
       << format_number(r.std_error) << ',' << format_number(r.runtime_ms) << '\n';
}

void write_json(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records)
    arr.push_back({{"experiment", r.experiment},
                   {"d", r.d},
                   {"lambda", r.lambda},
                   {"replicate", r.replicate},
                   {"seed", r.seed},
                   {"metric", r.metric},
                   {"value", r.value},
                   {"std_error", num(r.std_error)},
                   {"runtime_ms", num(r.runtime_ms)}});
  os << arr.dump(2) << '\n';
}

void write_records(const ExperimentConfig& cfg, const std::vector<ExperimentRecord>& records) {
  auto emit = [&](std::ostream& os) {
    if (cfg.format == "json")
      write_json(os, records);
    else
      write_csv(os, records);
  };
  if (cfg.out.empty() || cfg.out == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream out(cfg.out);
  if (!out) throw ConfigError("out", "cannot write '" + cfg.out + "'");
  emit(out);
}

}  // namespace randset
