#include "mcq/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcq {

double ChannelModel::resolved_file_bits(double file_time_s) const {
  return file_bits > 0 ? file_bits : bandwidth_hz * file_time_s;
}

double ChannelModel::spectral_target(double file_time_s) const {
  const double rate = fixed_rate > 0 ? fixed_rate : 1.0 / file_time_s;
  return resolved_file_bits(file_time_s) * rate / bandwidth_hz;
}

double ChannelModel::resolve_success_prob(double file_time_s) const {
  if (success_prob > 0) return success_prob;
  return success_probability_awgn_rayleigh(snr, spectral_target(file_time_s));
}

void ChannelModel::validate() const {
  if (success_prob < 0 || success_prob > 1)
    throw std::invalid_argument("channel: r must be in (0,1]");
  if (kind == ChannelKind::RetransmitFixedRate && success_prob == 0 &&
      !(snr > 0))
    throw std::invalid_argument("channel: retransmit needs r or a positive snr");
  if (kind == ChannelKind::WorstRate && !(snr > 0))
    throw std::invalid_argument("channel: worst-rate needs a positive snr");
  if (kind != ChannelKind::ErrorFree && !(bandwidth_hz > 0))
    throw std::invalid_argument("channel: bandwidth must be positive");
  if (file_bits < 0 || fixed_rate < 0)
    throw std::invalid_argument("channel: negative file_bits or fixed_rate");
}

double success_probability_awgn_rayleigh(double snr, double spectral_target) {
  if (!(snr > 0)) throw std::invalid_argument("snr must be positive");
  if (spectral_target < 0)
    throw std::invalid_argument("spectral target must be >= 0");
  const double threshold = std::exp2(2.0 * spectral_target) - 1.0;
  return std::exp(-threshold / snr);
}

std::vector<int> draw_decode_rounds(std::span<const double> success_probs,
                                    Rng& rng) {
  if (success_probs.empty())
    throw std::invalid_argument("draw_decode_rounds: no requesters");
  for (double r : success_probs)
    if (!(r > 0) || r > 1)
      throw std::invalid_argument("draw_decode_rounds: r must be in (0,1]");

  std::vector<int> rounds(success_probs.size(), 0);
  std::size_t remaining = success_probs.size();
  for (int round = 1; remaining > 0; ++round) {
    for (std::size_t k = 0; k < success_probs.size(); ++k) {
      if (rounds[k] != 0) continue;
      if (rng.uniform() < success_probs[k]) {
        rounds[k] = round;
        --remaining;
      }
    }
  }
  return rounds;
}

int draw_transmission_count(std::span<const double> success_probs, Rng& rng) {
  const auto rounds = draw_decode_rounds(success_probs, rng);
  return *std::max_element(rounds.begin(), rounds.end());
}

double nt_cdf(std::span<const double> success_probs, int n) {
  if (n < 1) throw std::invalid_argument("nt_cdf: n must be >= 1");
  double prod = 1.0;  // vacuous product for an empty user list
  for (double r : success_probs) {
    if (r < 0 || r > 1) throw std::invalid_argument("nt_cdf: r out of range");
    prod *= 1.0 - std::pow(1.0 - r, n);
  }
  return prod;
}

double worst_rate_service_time(std::span<const double> gains_sq,
                               double file_bits, double snr,
                               double bandwidth_hz) {
  if (gains_sq.empty())
    throw std::invalid_argument("worst_rate_service_time: no requesters");
  if (!(file_bits > 0) || !(snr > 0) || !(bandwidth_hz > 0))
    throw std::invalid_argument("worst_rate_service_time: bad parameters");
  double min_gain = gains_sq.front();
  for (double g : gains_sq) {
    if (!(g > 0))
      throw std::invalid_argument("worst_rate_service_time: gains must be > 0");
    min_gain = std::min(min_gain, g);
  }
  const double bits_per_s = bandwidth_hz * std::log2(1.0 + min_gain * snr) / 2.0;
  return file_bits / bits_per_s;
}

}  // namespace mcq
