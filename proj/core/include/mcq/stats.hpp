#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mcq {

// two-sided 95% Student-t quantile
double student_t_975(int df);
// one-sided 99% Student-t quantile
double student_t_99(int df);

struct BatchMeansResult {
  double mean = 0;
  double variance = 0;  // across batch means
  double ci95_half_width = 0;
  int batch_count = 0;
};

// Steady-state CI from contiguous batches of a post-warmup sample sequence.
BatchMeansResult batch_means(std::span<const double> samples,
                             int batch_count = 20);

// Queue-growth trend: positive OLS slope over window means with p < 0.01,
// guarded by actual growth (last-quarter mean > 1.5x first-quarter mean).
bool growth_trend(std::span<const double> window_means);

// Delay/sojourn estimates plus conservation counters for one run (or an
// aggregate over replications).
struct DelayStats {
  double mean_delay_s = 0;  // configured metric
  double variance = 0;
  double ci95_half_width = 0;

  double mean_sojourn_s = 0;      // all requests, local hits count as zero
  double mean_queue_delay_s = 0;  // requests that reached a queue
  double mean_type1_delay_s = 0;

  std::vector<double> per_file_mean;
  std::vector<double> per_user_mean;

  std::uint64_t arrivals = 0;
  std::uint64_t hits = 0;
  std::uint64_t type1 = 0;
  std::uint64_t type2 = 0;
  std::uint64_t served_entries = 0;
  std::uint64_t served_requests = 0;
  std::uint64_t transmissions = 0;
  std::uint64_t coded_transmissions = 0;

  std::size_t max_queue_entries = 0;
  double max_queue_delay_s = 0;
  bool unstable = false;
  double horizon_time_s = 0;
  std::uint64_t trace_hash = 0;

  bool operator==(const DelayStats&) const = default;
};

}  // namespace mcq
