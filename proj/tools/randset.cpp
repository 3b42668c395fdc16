#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "randset/error.hpp"
#include "randset/experiments.hpp"
#include "randset/parallel.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;

std::string experiment_list() {
  std::string s;
  for (const auto& name : randset::registered_experiments()) s += "\n  " + name;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo experiments for random intersection models and Poisson tessellations"};
  app.footer("Experiments:" + experiment_list() + "\n\nRANDSET_THREADS caps the worker pool.");

  std::string experiment, config, d, lambda, replicates, samples, seed, out, format, grid, eps,
      beta;
  bool timing = false;
  bool serial = false;
  app.add_option("experiment", experiment, "experiment name")->required();
  app.add_option("--config", config, "flat key = value config file");
  auto* o_d = app.add_option("--d", d, "dimension");
  auto* o_lambda = app.add_option("--lambda", lambda, "comma-separated intensities");
  auto* o_rep = app.add_option("--replicates", replicates, "replicates per intensity");
  auto* o_samples = app.add_option("--samples", samples, "samples per replicate");
  auto* o_seed = app.add_option("--seed", seed, "master seed");
  auto* o_out = app.add_option("--out", out, "output path (default stdout)");
  auto* o_format = app.add_option("--format", format, "csv or json");
  auto* o_grid = app.add_option("--grid-size", grid, "ray grid size");
  auto* o_eps = app.add_option("--eps", eps, "ball radius for meeting counts");
  auto* o_beta = app.add_option("--beta", beta, "comma-separated cone half-angles");
  app.add_flag("--timing", timing, "fill runtime_ms (output no longer byte-reproducible)");
  app.add_flag("--serial", serial, "run replicates on one thread");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    randset::configure_threads_from_env();
    randset::ExperimentConfig cfg = randset::default_config(experiment);
    if (!config.empty()) randset::apply_config_file(cfg, config);
    if (cfg.experiment != experiment)
      throw randset::ConfigError("experiment", "config names '" + cfg.experiment +
                                                   "' but the command line asks for '" +
                                                   experiment + "'");
    const std::pair<CLI::Option*, std::pair<const char*, const std::string*>> flags[] = {
        {o_d, {"d", &d}},
        {o_lambda, {"lambda", &lambda}},
        {o_rep, {"replicates", &replicates}},
        {o_samples, {"samples", &samples}},
        {o_seed, {"seed", &seed}},
        {o_out, {"out", &out}},
        {o_format, {"format", &format}},
        {o_grid, {"grid_size", &grid}},
        {o_eps, {"eps", &eps}},
        {o_beta, {"beta", &beta}}};
    for (const auto& [opt, kv] : flags)
      if (opt->count() > 0) randset::set_config_field(cfg, kv.first, *kv.second);
    if (timing) cfg.timing = true;
    if (serial) cfg.execution = randset::Execution::Serial;
    randset::validate(cfg);
    const auto records = randset::run_experiment(cfg);
    randset::write_records(cfg, records);
  } catch (const randset::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigExit;
  } catch (const randset::DomainError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kConfigExit;
  } catch (const randset::UnsupportedConfiguration& e) {
    std::cerr << "unsupported configuration: " << e.what() << '\n';
    return kConfigExit;
  } catch (const randset::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalExit;
  } catch (const randset::UnboundedCell& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalExit;
  }
  return 0;
}
