#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mcq/traffic.hpp"

namespace mcq {

// The printed fixed-point equation comes in two forms that differ by the
// Pollaczek-Khinchine bracket: PkFull multiplies rho/(1-rho) by
// (E[S]/2 + Var[S]/(2E[S])); UtilizationOnly is the bare rho/(1-rho).
// CLI spelling: eq5 = PkFull, eq6 = UtilizationOnly.
enum class BracketMode { PkFull, UtilizationOnly };

struct FixedPointSolution {
  double delay = 0;        // mean type-1 delay d
  double utilization = 0;  // rho at d
  double residual = 0;     // |f(d) - d|
  std::vector<double> effective_rates;  // lambda'_i at d
  BracketMode mode = BracketMode::PkFull;
};

// M/G/1 mean waiting time with service mix P[S=s_i] = lambda_i/lambda-bar.
// nullopt when rho >= 1 (unstable); 0 when there is no traffic.
std::optional<double> fifo_mean_delay(const RateMatrix& rates,
                                      const Catalog& catalog);

// Mean type-1 delay of the multicast queue: unique root of f(d) = d on
// (d0, inf) with effective rates lambda'_i = lambda_i/(1+lambda_i d),
// found by bracketed bisection to residual < 1e-9.
FixedPointSolution multicast_fixed_point(std::span<const double> file_rates,
                                         const Catalog& catalog,
                                         BracketMode mode);

// Mean delay over type-1 and type-2 requests of one file:
// (lambda' d + (lambda - lambda') d/2) / lambda.
double per_file_mean_delay(double rate, double effective_rate, double delay);

// Aggregate request-weighted mean of per_file_mean_delay over a solution.
double mixture_mean_delay(std::span<const double> file_rates,
                          const FixedPointSolution& solution);

// Per-file aggregate LRU miss rates under Che's approximation: each user's
// cache has its own characteristic time, lambda_m,ij = lambda_ij e^{-lambda_ij T_C}.
std::vector<double> lru_miss_rates(const RateMatrix& rates, int capacity);

// Multicast fixed point fed by LRU miss streams: per-user Che constant,
// miss rates lambda_ij e^{-lambda_ij T_C}, aggregated per file.
FixedPointSolution lru_fed_fixed_point(const RateMatrix& rates, int capacity,
                                       const Catalog& catalog,
                                       BracketMode mode);

// Multicast queue over a retransmission channel: joint fixed point over the
// merged-requester distribution (origin + Bernoulli(q_ik) per other user)
// and the transmission-count law; damped outer iteration to |dd| < 1e-8.
FixedPointSolution fading_fixed_point(const RateMatrix& rates,
                                      std::span<const double> success_probs,
                                      const Catalog& catalog, BracketMode mode);

// Per-user fixed points of the partition-coded scheme with deterministic
// batch service time; Var[S] = 0.
std::vector<FixedPointSolution> coded_per_user_fixed_point(
    const RateMatrix& rates, int cache_capacity, const Catalog& catalog);

}  // namespace mcq
