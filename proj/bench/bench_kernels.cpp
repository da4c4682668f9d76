// Serial reference kernels against their OpenMP forms.  Exec is the benchmark argument:
// 0 = serial, 1 = parallel.

#include <cmath>

#include <benchmark/benchmark.h>

#include "steinevt/kernels.hpp"
#include "steinevt/maxima_evt.hpp"
#include "steinevt/mo_geometric.hpp"

using namespace steinevt;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_GridAbsDiffMax(benchmark::State& st) {
  std::vector<double> x(200000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = -5.0 + 20.0 * static_cast<double>(i) / x.size();
  auto f = [](double t) { return std::pow(1.0 - std::exp(-t) / 1000.0, 1000.0); };
  auto g = [](double t) { return std::exp(-std::exp(-t)); };
  for (auto _ : st) benchmark::DoNotOptimize(grid_abs_diff_max(x, f, g, exec_of(st)));
}

void BM_KolmogorovOracleNormal(benchmark::State& st) {
  const maxima::MaxScenario sc{dist::MarginalLaw::std_normal(), 1000, 'c', 1.0};
  for (auto _ : st) benchmark::DoNotOptimize(maxima::kolmogorov_oracle(sc, exec_of(st)));
}

void BM_ImmigrationDeath(benchmark::State& st) {
  const auto spec = stein::IntensitySpec::interval(0.0, INFINITY, [](double x) { return 5.0 * std::exp(-x); });
  for (auto _ : st) benchmark::DoNotOptimize(immigration_death_counts(spec, {}, 12.0, 10000, 1, exec_of(st)));
}

void BM_MOGeometricCells(benchmark::State& st) {
  const auto sc = mogeo::Scenario::from_gamma_delta(1.0, 1.0, 0.01, 100, -std::log(100.0));
  std::vector<std::pair<long, long>> cells;
  for (long k = 0; k < 4; ++k)
    for (long l = 0; l < 4; ++l) cells.push_back({3 * k, 5 * l});
  if (st.range(0) == 0) {
    // rectangle_consistency always runs its OpenMP loop; the serial form is one cell per call
    for (auto _ : st)
      for (const auto& c : cells) benchmark::DoNotOptimize(mogeo::rectangle_consistency(sc, {c}));
  } else {
    for (auto _ : st) benchmark::DoNotOptimize(mogeo::rectangle_consistency(sc, cells));
  }
}

}  // namespace

BENCHMARK(BM_GridAbsDiffMax)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KolmogorovOracleNormal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ImmigrationDeath)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MOGeometricCells)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
