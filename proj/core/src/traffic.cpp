#include "mcq/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcq {

Catalog Catalog::uniform(int file_count, double file_time_s) {
  Catalog c;
  c.file_times.assign(static_cast<std::size_t>(file_count), file_time_s);
  c.validate();
  return c;
}

bool Catalog::equal_sizes() const {
  for (double s : file_times)
    if (s != file_times.front()) return false;
  return true;
}

void Catalog::validate() const {
  if (file_times.empty())
    throw std::invalid_argument("catalog: file count must be >= 1");
  for (double s : file_times)
    if (!(s > 0) || !std::isfinite(s))
      throw std::invalid_argument("catalog: file times must be positive");
}

double RateMatrix::file_rate(int file) const {
  double sum = 0;
  for (int j = 0; j < user_count; ++j) sum += at(file, j);
  return sum;
}

double RateMatrix::user_rate(int user) const {
  double sum = 0;
  for (int i = 0; i < file_count; ++i) sum += at(i, user);
  return sum;
}

double RateMatrix::total_rate() const {
  double sum = 0;
  for (double r : rates) sum += r;
  return sum;
}

std::vector<double> RateMatrix::file_rates() const {
  std::vector<double> out(static_cast<std::size_t>(file_count));
  for (int i = 0; i < file_count; ++i) out[i] = file_rate(i);
  return out;
}

std::vector<double> RateMatrix::user_file_rates(int user) const {
  std::vector<double> out(static_cast<std::size_t>(file_count));
  for (int i = 0; i < file_count; ++i) out[i] = at(i, user);
  return out;
}

void RateMatrix::validate() const {
  if (file_count < 1 || user_count < 1)
    throw std::invalid_argument("rate matrix: empty dimension");
  if (rates.size() !=
      static_cast<std::size_t>(file_count) * static_cast<std::size_t>(user_count))
    throw std::invalid_argument("rate matrix: dimension mismatch");
  double sum = 0;
  for (double r : rates) {
    if (r < 0 || !std::isfinite(r))
      throw std::invalid_argument("rate matrix: rates must be finite and >= 0");
    sum += r;
  }
  if (!std::isfinite(sum))
    throw std::invalid_argument("rate matrix: total rate not finite");
}

std::vector<double> zipf_pmf(int file_count, double alpha) {
  if (file_count < 1) throw std::invalid_argument("zipf_pmf: M must be >= 1");
  if (alpha < 0) throw std::invalid_argument("zipf_pmf: alpha must be >= 0");
  std::vector<double> pmf(static_cast<std::size_t>(file_count));
  double norm = 0;
  for (int i = 0; i < file_count; ++i) {
    pmf[i] = std::pow(static_cast<double>(i + 1), -alpha);
    norm += pmf[i];
  }
  for (double& p : pmf) p /= norm;
  return pmf;
}

RateMatrix build_rate_matrix(int file_count, int user_count,
                             double per_user_rate,
                             const std::vector<double>& pmf) {
  if (per_user_rate < 0)
    throw std::invalid_argument("build_rate_matrix: rate must be >= 0");
  if (static_cast<int>(pmf.size()) != file_count)
    throw std::invalid_argument("build_rate_matrix: pmf length != file count");
  RateMatrix m;
  m.file_count = file_count;
  m.user_count = user_count;
  m.rates.resize(static_cast<std::size_t>(file_count) * user_count);
  for (int i = 0; i < file_count; ++i)
    for (int j = 0; j < user_count; ++j) m.at(i, j) = per_user_rate * pmf[i];
  m.validate();
  return m;
}

RequestGenerator::RequestGenerator(const RateMatrix& rates)
    : user_count_(rates.user_count) {
  cumulative_.reserve(rates.rates.size());
  double acc = 0;
  for (double r : rates.rates) {
    acc += r;
    cumulative_.push_back(acc);
  }
  total_rate_ = acc;
}

std::optional<RequestEvent> RequestGenerator::next(Rng& rng) {
  if (total_rate_ <= 0) return std::nullopt;
  clock_ += rng.exponential(total_rate_);
  const double u = rng.uniform() * total_rate_;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;  // u == total within rounding
  const auto idx = static_cast<int>(it - cumulative_.begin());
  return RequestEvent{clock_, idx / user_count_, idx % user_count_};
}

}  // namespace mcq
