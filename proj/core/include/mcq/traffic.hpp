#pragma once

#include <optional>
#include <vector>

#include "mcq/rng.hpp"

namespace mcq {

// File library. file_times[i] is the transmission time s_i of file i in
// seconds at the link rate (s_i = F_i / R).
struct Catalog {
  std::vector<double> file_times;

  static Catalog uniform(int file_count, double file_time_s);

  int file_count() const { return static_cast<int>(file_times.size()); }
  bool equal_sizes() const;
  void validate() const;  // M >= 1, every s_i > 0
};

// Per-(file,user) Poisson request rates lambda_ij, row-major by file.
struct RateMatrix {
  int file_count = 0;
  int user_count = 0;
  std::vector<double> rates;

  double at(int file, int user) const {
    return rates[static_cast<std::size_t>(file) * user_count + user];
  }
  double& at(int file, int user) {
    return rates[static_cast<std::size_t>(file) * user_count + user];
  }
  double file_rate(int file) const;              // lambda_i
  double user_rate(int user) const;              // sum_i lambda_ij
  double total_rate() const;                     // lambda-bar
  std::vector<double> file_rates() const;        // all lambda_i
  std::vector<double> user_file_rates(int user) const;
  void validate() const;                         // entries >= 0, finite sums
};

// Zipf popularity: p_i proportional to i^{-alpha}, i = 1..M.
std::vector<double> zipf_pmf(int file_count, double alpha);

// Homogeneous users: lambda_ij = per_user_rate * pmf[i] for every user.
RateMatrix build_rate_matrix(int file_count, int user_count,
                             double per_user_rate,
                             const std::vector<double>& pmf);

struct RequestEvent {
  double time = 0;
  int file = 0;
  int user = 0;
};

// Superposed IRM process: one exponential clock at rate lambda-bar plus a
// categorical (file,user) label, equivalent in law to M*L independent
// Poisson streams but O(1) state.
class RequestGenerator {
 public:
  explicit RequestGenerator(const RateMatrix& rates);

  // nullopt iff the total rate is zero (no-event signal)
  std::optional<RequestEvent> next(Rng& rng);

  double total_rate() const { return total_rate_; }
  double clock() const { return clock_; }

 private:
  double clock_ = 0;
  double total_rate_ = 0;
  int user_count_ = 0;
  std::vector<double> cumulative_;  // over (file,user) pairs
};

}  // namespace mcq
