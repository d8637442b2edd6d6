#pragma once

#include <span>
#include <vector>

#include "mcq/rng.hpp"

namespace mcq {

enum class ChannelKind {
  ErrorFree,
  WorstRate,           // rate adapted to the worst requester's gain
  RetransmitFixedRate  // fixed rate, retransmit until everyone decodes
};

// Link model. Per-user decode probability r is either given directly or
// derived from the Rayleigh/AWGN capacity threshold. file_bits and fixed_rate
// of 0 mean "derive from the catalog file time" (spectral target 1).
struct ChannelModel {
  ChannelKind kind = ChannelKind::ErrorFree;
  double success_prob = 0;  // r in (0,1]; 0 = derive from snr
  double snr = 10.0;        // linear power ratio
  double bandwidth_hz = 1e7;
  double file_bits = 0;
  double fixed_rate = 0;  // files/second

  double spectral_target(double file_time_s) const;
  double resolve_success_prob(double file_time_s) const;
  double resolved_file_bits(double file_time_s) const;
  void validate() const;
};

// r = P[log2(1 + H^2 snr)/2 >= spectral_target] with H^2 ~ exponential(1)
double success_probability_awgn_rayleigh(double snr, double spectral_target);

// Per-requester decode round under independent geometric(r_j) retries;
// element k is the first round in which user k decodes.
std::vector<int> draw_decode_rounds(std::span<const double> success_probs,
                                    Rng& rng);

// Total transmissions until every requester has decoded: max over users of
// independent geometric(r_j) draws.
int draw_transmission_count(std::span<const double> success_probs, Rng& rng);

// P[N_t <= n] = prod_j (1 - (1-r_j)^n); 1.0 for an empty user list.
double nt_cdf(std::span<const double> success_probs, int n);

// One transmission at the rate of the worst requester:
// file_bits / (bandwidth * log2(1 + min_j gain_j * snr) / 2) seconds.
double worst_rate_service_time(std::span<const double> gains_sq,
                               double file_bits, double snr,
                               double bandwidth_hz);

}  // namespace mcq
