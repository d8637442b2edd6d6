#include <benchmark/benchmark.h>

#include "mcq/analysis.hpp"

namespace {

void BM_MulticastFixedPoint(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto catalog = mcq::Catalog::uniform(m, 1.0);
  std::vector<double> rates(m);
  for (int i = 0; i < m; ++i) rates[i] = 2.0 / (i + 1);
  for (auto _ : state) {
    auto sol = mcq::multicast_fixed_point(rates, catalog,
                                          mcq::BracketMode::PkFull);
    benchmark::DoNotOptimize(sol.delay);
  }
}
BENCHMARK(BM_MulticastFixedPoint)->Arg(10)->Arg(100)->Arg(1000);

void BM_FadingFixedPoint(benchmark::State& state) {
  const int m = 50;
  const auto catalog = mcq::Catalog::uniform(m, 1.0);
  auto rates = mcq::build_rate_matrix(m, 10, 0.6, mcq::zipf_pmf(m, 1.0));
  const std::vector<double> r(10, 0.9);
  for (auto _ : state) {
    auto sol =
        mcq::fading_fixed_point(rates, r, catalog, mcq::BracketMode::PkFull);
    benchmark::DoNotOptimize(sol.delay);
  }
}
BENCHMARK(BM_FadingFixedPoint)->Unit(benchmark::kMillisecond);

void BM_ZipfPmf(benchmark::State& state) {
  for (auto _ : state) {
    auto pmf = mcq::zipf_pmf(static_cast<int>(state.range(0)), 1.0);
    benchmark::DoNotOptimize(pmf.data());
  }
}
BENCHMARK(BM_ZipfPmf)->Arg(100)->Arg(10000);

}  // namespace
