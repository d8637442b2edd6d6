#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mcq/analysis.hpp"
#include "mcq/errors.hpp"
#include "mcq/simulator.hpp"

using namespace mcq;

namespace {

SchemeConfig base(SchemeId scheme) {
  SchemeConfig cfg;
  cfg.file_count = 20;
  cfg.file_time_s = 1.0;
  cfg.user_count = 4;
  cfg.per_user_rate = 0.1;
  cfg.zipf_alpha = 1.0;
  cfg.scheme = scheme;
  cfg.horizon_events = 30000;
  cfg.seed = 77;
  return cfg;
}

SchemeConfig homogeneous_probe() {
  SchemeConfig cfg = base(SchemeId::Multicast);
  cfg.file_count = 100;
  cfg.user_count = 10;
  cfg.horizon_events = 60000;
  return cfg;
}

}  // namespace

TEST_CASE("zero arrival rate: no events, all counters zero") {
  SchemeConfig cfg = base(SchemeId::Multicast);
  cfg.per_user_rate = 0.0;
  const DelayStats s = run(cfg);
  CHECK(s.arrivals == 0);
  CHECK(s.type1 == 0);
  CHECK(s.type2 == 0);
  CHECK(s.mean_delay_s == 0.0);
  CHECK(s.mean_sojourn_s == 0.0);
}

TEST_CASE("identical config gives bitwise-identical stats") {
  for (SchemeId scheme : {SchemeId::Fifo, SchemeId::Multicast, SchemeId::LruM,
                          SchemeId::PcsM, SchemeId::Cdls, SchemeId::LruCm}) {
    SchemeConfig cfg = base(scheme);
    if (scheme_uses_lru(scheme) || scheme_uses_partition(scheme))
      cfg.cache_capacity = 5;
    cfg.replications = 2;
    const DelayStats a = run(cfg);
    const DelayStats b = run(cfg);
    CHECK(a == b);
  }
}

TEST_CASE("conservation: arrivals = hits + type1 + type2 = everything served") {
  for (SchemeId scheme :
       {SchemeId::Multicast, SchemeId::LruM, SchemeId::CdlsM, SchemeId::MpcsM,
        SchemeId::UpoM, SchemeId::LruCm}) {
    SchemeConfig cfg = base(scheme);
    cfg.per_user_rate = 0.8;  // enough load to exercise merging
    if (scheme_uses_lru(scheme) || scheme_uses_partition(scheme))
      cfg.cache_capacity = 5;
    const DelayStats s = run(cfg);
    CHECK(s.arrivals == s.hits + s.type1 + s.type2);
    CHECK(s.served_requests == s.type1 + s.type2);
    if (scheme == SchemeId::Multicast) CHECK(s.hits == 0);
  }
}

TEST_CASE("fifo M/D/1 matches the Pollaczek-Khinchine mean") {
  SchemeConfig cfg;
  cfg.file_count = 1;
  cfg.user_count = 1;
  cfg.per_user_rate = 0.5;
  cfg.scheme = SchemeId::Fifo;
  cfg.horizon_events = 300000;
  cfg.seed = 3;
  const DelayStats s = run(cfg);
  CHECK(s.mean_delay_s == doctest::Approx(0.5).epsilon(0.05));
  CHECK_FALSE(s.unstable);
}

TEST_CASE("multicast queue length never exceeds the catalog size") {
  SchemeConfig cfg = base(SchemeId::Multicast);
  cfg.per_user_rate = 30.0;  // far beyond capacity
  const DelayStats s = run(cfg);
  CHECK(s.max_queue_entries <= static_cast<std::size_t>(cfg.file_count));
  CHECK_FALSE(s.unstable);
  // waiting time bound: a full rotation plus one residual service
  CHECK(s.max_queue_delay_s <=
        cfg.file_count * cfg.file_time_s + cfg.file_time_s + 1e-9);
}

TEST_CASE("single user, single file: two-state regenerative oracle") {
  SchemeConfig cfg;
  cfg.file_count = 1;
  cfg.user_count = 1;
  cfg.per_user_rate = 1.0;
  cfg.scheme = SchemeId::Multicast;
  cfg.horizon_events = 400000;
  cfg.seed = 29;
  const DelayStats s = run(cfg);
  // busy fraction e/(e+1); arrivals in a busy period wait the residual s/2
  const double oracle = std::exp(1.0) / (std::exp(1.0) + 1.0) / 2.0;
  CHECK(std::abs(s.mean_queue_delay_s - oracle) <
        std::max(3 * s.ci95_half_width, 0.01));
}

TEST_CASE("LRU-M with zero capacity is trace-identical to plain multicast") {
  SchemeConfig multicast = base(SchemeId::Multicast);
  SchemeConfig lru = base(SchemeId::LruM);
  lru.cache_capacity = 0;
  const DelayStats a = run(multicast);
  DelayStats b = run(lru);
  CHECK(a.trace_hash == b.trace_hash);
  CHECK(a == b);
}

TEST_CASE("retransmission channel with r = 1 is trace-identical to error-free") {
  SchemeConfig plain = base(SchemeId::Multicast);
  SchemeConfig retx = plain;
  retx.channel.kind = ChannelKind::RetransmitFixedRate;
  retx.channel.success_prob = 1.0;
  const DelayStats a = run(plain);
  const DelayStats b = run(retx);
  CHECK(a.trace_hash == b.trace_hash);
  CHECK(a == b);
}

TEST_CASE("PCS-M with C=0 and L=1 behaves as FIFO with unit service") {
  SchemeConfig fifo = base(SchemeId::Fifo);
  fifo.user_count = 1;
  fifo.per_user_rate = 0.3;
  SchemeConfig pcs = fifo;
  pcs.scheme = SchemeId::PcsM;
  pcs.cache_capacity = 0;
  const DelayStats a = run(fifo);
  const DelayStats b = run(pcs);
  CHECK(a.type2 == 0);                         // fifo never merges
  CHECK(b.transmissions == b.served_entries);  // one entry per unit batch
  CHECK(b.horizon_time_s == a.horizon_time_s);
  CHECK(b.mean_delay_s == doctest::Approx(a.mean_delay_s).epsilon(0.05));
  CHECK(b.mean_sojourn_s == doctest::Approx(a.mean_sojourn_s).epsilon(0.05));
}

TEST_CASE("fifo beyond capacity raises the instability flag; stable does not") {
  SchemeConfig cfg;
  cfg.file_count = 1;
  cfg.user_count = 1;
  cfg.scheme = SchemeId::Fifo;
  cfg.horizon_events = 60000;
  cfg.seed = 41;

  cfg.per_user_rate = 1.5;
  CHECK(run(cfg).unstable);
  cfg.per_user_rate = 0.5;
  CHECK_FALSE(run(cfg).unstable);
}

TEST_CASE("merging schemes never trip the instability flag under stress") {
  for (SchemeId scheme : {SchemeId::Multicast, SchemeId::LruM}) {
    SchemeConfig cfg = base(scheme);
    cfg.per_user_rate = 12.0;
    if (scheme == SchemeId::LruM) cfg.cache_capacity = 5;
    CHECK_FALSE(run(cfg).unstable);
  }
}

TEST_CASE("coded schemes produce decodable coded transmissions") {
  SchemeConfig cfg = base(SchemeId::Cdls);
  cfg.file_count = 30;
  cfg.user_count = 6;
  cfg.per_user_rate = 0.5;
  cfg.cache_capacity = 12;
  cfg.horizon_events = 60000;
  // the engine validates every coded pair against the tracked caches and
  // throws on an undecodable decision
  const DelayStats s = run(cfg);
  CHECK(s.coded_transmissions > 0);

  SchemeConfig cm = base(SchemeId::LruCm);
  cm.file_count = 30;
  cm.user_count = 6;
  cm.per_user_rate = 2.5;
  cm.cache_capacity = 12;
  cm.horizon_events = 60000;
  const DelayStats s2 = run(cm);
  CHECK(s2.coded_transmissions > 0);
}

TEST_CASE("sweep: one value equals a plain run, seeds shared across values") {
  SchemeConfig cfg = base(SchemeId::Multicast);
  cfg.replications = 2;
  const std::vector<double> one{4.0};
  const auto points = sweep(cfg, SweepAxis::UserCount, one);
  REQUIRE(points.size() == 1);
  CHECK(points.front().stats == run(cfg));

  const std::vector<double> values{2, 4, 8};
  const auto a = sweep(cfg, SweepAxis::UserCount, values, 2);
  const auto b = sweep(cfg, SweepAxis::UserCount, values, 1);
  for (std::size_t i = 0; i < values.size(); ++i)
    CHECK(a[i].stats == b[i].stats);

  CHECK_THROWS_AS(sweep(cfg, SweepAxis::UserCount, std::vector<double>{}),
                  std::invalid_argument);
}

TEST_CASE("multicast mean delay grows with the user count") {
  SchemeConfig cfg = homogeneous_probe();
  const std::vector<double> users{2, 6, 10, 14};
  const auto points = sweep(cfg, SweepAxis::UserCount, users);
  for (std::size_t i = 1; i < points.size(); ++i)
    CHECK(points[i].stats.mean_delay_s >= points[i - 1].stats.mean_delay_s);
}

TEST_CASE("sweep axes rebuild the traffic") {
  SchemeConfig cfg = base(SchemeId::Multicast);
  const auto heavier =
      with_axis_value(cfg, SweepAxis::PerUserRate, 0.9).rate_matrix();
  CHECK(heavier.total_rate() == doctest::Approx(0.9 * cfg.user_count));
  const auto wider =
      with_axis_value(cfg, SweepAxis::UserCount, 9).rate_matrix();
  CHECK(wider.user_count == 9);
  CHECK(with_axis_value(cfg, SweepAxis::ZipfAlpha, 0.0).zipf_alpha == 0.0);
}

TEST_CASE("config validation rejects contradictions") {
  SchemeConfig cfg = base(SchemeId::Multicast);
  cfg.cache_capacity = 3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  SchemeConfig upo = base(SchemeId::UpoM);
  upo.file_count = 100;
  upo.user_count = 10;
  upo.cache_capacity = 15;  // t = 1.5
  CHECK_THROWS_AS(upo.validate(), unsupported_configuration_error);
  upo.cache_capacity = 10;  // t = 1
  upo.validate();

  SchemeConfig coded_fading = base(SchemeId::PcsM);
  coded_fading.cache_capacity = 5;
  coded_fading.channel.kind = ChannelKind::RetransmitFixedRate;
  coded_fading.channel.success_prob = 0.9;
  CHECK_THROWS_AS(coded_fading.validate(), std::invalid_argument);

  SchemeConfig warm = base(SchemeId::Multicast);
  warm.warmup_fraction = 1.0;
  CHECK_THROWS_AS(warm.validate(), std::invalid_argument);
}

TEST_CASE("per-user and per-file means are populated") {
  SchemeConfig cfg = base(SchemeId::PcsM);
  cfg.file_count = 50;
  cfg.user_count = 5;
  cfg.cache_capacity = 10;
  cfg.per_user_rate = 0.3;
  const DelayStats s = run(cfg);
  REQUIRE(s.per_user_mean.size() == 5);
  REQUIRE(s.per_file_mean.size() == 50);
  CHECK(s.per_user_mean[0] > 0);
  CHECK(s.per_file_mean[0] > 0);
}
