#include <benchmark/benchmark.h>

#include "mcq/simulator.hpp"

namespace {

mcq::SchemeConfig base_config(mcq::SchemeId scheme) {
  mcq::SchemeConfig cfg;
  cfg.file_count = 100;
  cfg.file_time_s = 1.0;
  cfg.user_count = 10;
  cfg.per_user_rate = 0.5;
  cfg.zipf_alpha = 1.0;
  cfg.scheme = scheme;
  cfg.horizon_events = 20000;
  cfg.seed = 42;
  return cfg;
}

void BM_MulticastRun(benchmark::State& state) {
  auto cfg = base_config(mcq::SchemeId::Multicast);
  for (auto _ : state) {
    auto stats = mcq::run_replication(cfg, 0);
    benchmark::DoNotOptimize(stats.mean_delay_s);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(cfg.horizon_events));
}
BENCHMARK(BM_MulticastRun)->Unit(benchmark::kMillisecond);

void BM_LruMulticastRun(benchmark::State& state) {
  auto cfg = base_config(mcq::SchemeId::LruM);
  cfg.cache_capacity = 40;
  for (auto _ : state) {
    auto stats = mcq::run_replication(cfg, 0);
    benchmark::DoNotOptimize(stats.mean_delay_s);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(cfg.horizon_events));
}
BENCHMARK(BM_LruMulticastRun)->Unit(benchmark::kMillisecond);

void BM_PcsMRun(benchmark::State& state) {
  auto cfg = base_config(mcq::SchemeId::PcsM);
  cfg.cache_capacity = 10;
  for (auto _ : state) {
    auto stats = mcq::run_replication(cfg, 0);
    benchmark::DoNotOptimize(stats.mean_delay_s);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(cfg.horizon_events));
}
BENCHMARK(BM_PcsMRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
