#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcq/channel.hpp"
#include "mcq/stats.hpp"
#include "mcq/traffic.hpp"

namespace mcq {

enum class SchemeId {
  Fifo,
  Multicast,
  LruM,
  PcsM,
  MpcsM,
  Cdls,
  CdlsM,
  UpoM,
  LruCm,
};

const char* scheme_name(SchemeId scheme);
bool scheme_uses_lru(SchemeId scheme);
bool scheme_uses_partition(SchemeId scheme);

enum class Metric { QueuingDelay, Sojourn };

// Full experiment description. Traffic is homogeneous: every user requests at
// per_user_rate with the same Zipf popularity.
struct SchemeConfig {
  int file_count = 1;
  double file_time_s = 1.0;
  int user_count = 1;
  double per_user_rate = 0.0;
  double zipf_alpha = 1.0;
  SchemeId scheme = SchemeId::Fifo;
  int cache_capacity = 0;
  ChannelModel channel;
  std::uint64_t horizon_events = 100000;
  double warmup_fraction = 0.2;
  std::uint64_t seed = 1;
  int replications = 1;
  Metric metric = Metric::QueuingDelay;

  Catalog catalog() const;
  RateMatrix rate_matrix() const;
  void validate() const;
};

// One event-driven replication; deterministic given (config, replication).
DelayStats run_replication(const SchemeConfig& config, int replication);

// All replications of a config, aggregated (identical config gives
// bitwise-identical results).
DelayStats run(const SchemeConfig& config);
std::vector<DelayStats> run_replications(const SchemeConfig& config,
                                         int threads = 1);
DelayStats aggregate(const std::vector<DelayStats>& reps);

enum class SweepAxis { UserCount, PerUserRate, CacheCapacity, ZipfAlpha, Snr };

SweepAxis sweep_axis_from_string(const std::string& name);
const char* sweep_axis_name(SweepAxis axis);
SchemeConfig with_axis_value(const SchemeConfig& base, SweepAxis axis,
                             double value);

struct SweepPoint {
  double value = 0;
  DelayStats stats;                // aggregate over replications
  std::vector<DelayStats> replications;
};

// Independent runs per axis value; replication seeds are derived identically
// across values so sweeps share random numbers point to point.
std::vector<SweepPoint> sweep(const SchemeConfig& base, SweepAxis axis,
                              std::span<const double> values, int threads = 1);

}  // namespace mcq
