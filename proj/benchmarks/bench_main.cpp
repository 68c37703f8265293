#include <benchmark/benchmark.h>

#include <cmath>

#include "freqlab/gaussian.hpp"
#include "freqlab/hermite.hpp"
#include "freqlab/recenter.hpp"
#include "freqlab/scenario.hpp"
#include "freqlab/similarity.hpp"
#include "freqlab/solver.hpp"

using namespace freqlab;

namespace {

Field wavy(int dim, int n, double t) {
  return sample([](const Point& x, double) { return 1.0 + std::cos(x[0]) * std::sin(2 * x[1] + 0.3); },
                make_grid(dim, n), t);
}

void BM_Step(benchmark::State& state) {
  const int dim = int(state.range(0)), n = int(state.range(1));
  const auto u = wavy(dim, n, -1.0);
  const auto g = u.grid();
  const auto c = CoefficientSet::create(
      dim, {}, [](const Point& x, double) { return std::cos(x[0]); }, 1.0, 1.0, g, -1.0, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(step(u, c, {0, 0}, 1e-4));
}
BENCHMARK(BM_Step)->Args({1, 512})->Args({2, 64})->Args({2, 128});

void BM_GaussianProbe(benchmark::State& state) {
  const auto u = wavy(int(state.range(0)), int(state.range(1)), -0.1);
  const double t = -std::pow(10.0, -double(state.range(2)));
  for (auto _ : state) {
    GaussianProbe p(u, t);
    benchmark::DoNotOptimize(p.at({0.1, 0.2}));
  }
}
BENCHMARK(BM_GaussianProbe)->Args({1, 512, 1})->Args({1, 512, 3})->Args({2, 64, 1})->Args({2, 64, 3});

void BM_ToSimilarity(benchmark::State& state) {
  const int dim = int(state.range(0));
  const auto u = wavy(dim, dim == 1 ? 512 : 64, -0.1);
  const auto yg = YGrid::make(dim);
  for (auto _ : state) benchmark::DoNotOptimize(to_similarity(u, yg));
}
BENCHMARK(BM_ToSimilarity)->Arg(1)->Arg(2);

void BM_Project(benchmark::State& state) {
  const auto yg = YGrid::make(int(state.range(0)));
  const auto U = scaled_basis({yg.dim, {2, 0}}, yg);
  for (auto _ : state) benchmark::DoNotOptimize(project(U, int(state.range(1))));
}
BENCHMARK(BM_Project)->Args({1, 12})->Args({2, 6});

void BM_FindXEps(benchmark::State& state) {
  const auto u = wavy(int(state.range(0)), 32, -0.1);
  for (auto _ : state) benchmark::DoNotOptimize(find_x_eps(u, 0.1));
}
BENCHMARK(BM_FindXEps)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_CaloricPipeline(benchmark::State& state) {
  Scenario s;
  s.initial = "caloric:2";
  for (auto _ : state) {
    const auto setup = build_setup(s);
    benchmark::DoNotOptimize(solve(setup.u0, setup.coefficients, {0, 0}, setup.schedule));
  }
}
BENCHMARK(BM_CaloricPipeline)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace
BENCHMARK_MAIN();
