#include <benchmark/benchmark.h>

#include "randset/models.hpp"
#include "randset/parallel.hpp"
#include "randset/rng.hpp"

using namespace randset;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::OpenMP;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}

void BM_ModelRadius(benchmark::State& state) {
  const auto mu = rho_measure(2);
  auto kernel = [&](std::size_t i) {
    RngStream rng(1, derive_stream("bench/radius", 0, i));
    return sample_model_radius(2, 1000.0, mu, BallShape{}, rng);
  };
  for (auto _ : state) benchmark::DoNotOptimize(map_replicates(256, kernel, mode(state)));
  label(state);
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_ModelRadius)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CroftonCell(benchmark::State& state) {
  auto kernel = [](std::size_t i) {
    RngStream rng(2, derive_stream("bench/crofton", 0, i));
    return crofton_cell(2, HyperplaneNormalization::ball_rate_two(), 10.0, rng).volume;
  };
  for (auto _ : state) benchmark::DoNotOptimize(map_replicates(128, kernel, mode(state)));
  label(state);
  state.SetItemsProcessed(state.iterations() * 128);
}
BENCHMARK(BM_CroftonCell)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_StarSetBuild(benchmark::State& state) {
  const auto mu = nu_hat_measure(2);
  auto kernel = [&](std::size_t i) {
    RngStream rng(3, derive_stream("bench/build", 0, i));
    return build_intersection(2, 300.0, mu, HalfSpaceShape{}, rng).radius(Direction::axis(2, 0));
  };
  for (auto _ : state) benchmark::DoNotOptimize(map_replicates(64, kernel, mode(state)));
  label(state);
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_StarSetBuild)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
