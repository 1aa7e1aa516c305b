#include <benchmark/benchmark.h>

#include <cmath>

#include "mslab/boundstate.hpp"
#include "mslab/evolution.hpp"
#include "mslab/multisoliton.hpp"
#include "mslab/spectral.hpp"

using namespace mslab;

namespace {

Field gaussian(const GridSpec& g) {
  return Field::sample(g, [](const Point& p) { return std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2])); });
}

}  // namespace

static void BM_Laplacian(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const GridSpec g(dim, static_cast<std::size_t>(state.range(1)), 10.0);
  const Field u = gaussian(g);
  for (auto _ : state) benchmark::DoNotOptimize(laplacian(u));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_Laplacian)->Args({1, 1024})->Args({1, 8192})->Args({2, 256})->Args({3, 64});

static void BM_StrangStep(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const GridSpec g(dim, static_cast<std::size_t>(state.range(1)), 10.0);
  const auto nl = Nonlinearity::pure_power(3.0, dim);
  Field u = gaussian(g);
  for (auto _ : state) {
    u = strang_step(nl, u, 1e-4);
    benchmark::DoNotOptimize(u);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_StrangStep)->Args({1, 1024})->Args({2, 256})->Args({3, 64});

static void BM_FamilyDistance(benchmark::State& state) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const GridSpec g(1, static_cast<std::size_t>(state.range(0)), 30.0);
  const BoundState b = compute_bound_state(nl, 1.0, 0, g);
  const Field u = std::exp(cplx(0.0, 0.4)) * spectral_shift(b.profile, std::vector<double>{3.3}) +
                  Field::sample(g, [](const Point& p) { return 0.05 * std::exp(-p[0] * p[0]); });
  for (auto _ : state) benchmark::DoNotOptimize(family_distance(u, b));
}
BENCHMARK(BM_FamilyDistance)->Arg(512)->Arg(2048);

static void BM_BoundState(benchmark::State& state) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const GridSpec g(1, static_cast<std::size_t>(state.range(0)), 20.0);
  for (auto _ : state) benchmark::DoNotOptimize(compute_bound_state(nl, 1.0, 0, g));
}
BENCHMARK(BM_BoundState)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
