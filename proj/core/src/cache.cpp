#include "mcq/cache.hpp"

#include <cmath>
#include <stdexcept>

#include "mcq/errors.hpp"

namespace mcq {

LruCache::LruCache(int capacity) : capacity_(capacity) {
  if (capacity < 0) throw std::invalid_argument("lru: capacity must be >= 0");
}

bool LruCache::access(int file) {
  auto it = index_.find(file);
  if (it == index_.end()) return false;
  order_.splice(order_.begin(), order_, it->second);
  return true;
}

void LruCache::insert(int file) {
  if (capacity_ == 0) return;
  if (index_.count(file))
    throw std::invalid_argument("lru: duplicate insert");
  if (static_cast<int>(order_.size()) == capacity_) {
    index_.erase(order_.back());
    order_.pop_back();
  }
  order_.push_front(file);
  index_[file] = order_.begin();
}

void PartitionPlacement::validate() const {
  if (file_count < 1 || user_count < 1)
    throw std::invalid_argument("placement: empty dimension");
  if (cache_capacity < 0 || cache_capacity > file_count)
    throw std::invalid_argument("placement: need 0 <= C <= M");
}

double che_constant(std::span<const double> file_rates, int capacity) {
  if (capacity < 0) throw std::invalid_argument("che_constant: C must be >= 0");
  if (capacity == 0) return 0.0;
  int positive = 0;
  for (double r : file_rates)
    if (r > 0) ++positive;
  if (capacity >= positive)
    throw no_finite_root_error(
        "che_constant: cache holds every requested file, no finite root");

  auto filled = [&](double t) {
    double sum = 0;
    for (double r : file_rates)
      if (r > 0) sum += 1.0 - std::exp(-r * t);
    return sum;
  };

  double hi = 1.0;
  while (filled(hi) < capacity) hi *= 2;
  double lo = 0.0;
  // filled is strictly increasing on the positive-rate files
  while (true) {
    const double mid = 0.5 * (lo + hi);
    const double residual = filled(mid) - capacity;
    if (std::abs(residual) < 1e-10 || mid == lo || mid == hi) return mid;
    if (residual < 0)
      lo = mid;
    else
      hi = mid;
  }
}

double miss_probability(double rate, double che_time) {
  if (rate < 0 || che_time < 0)
    throw std::invalid_argument("miss_probability: arguments must be >= 0");
  return std::exp(-rate * che_time);
}

}  // namespace mcq
