#pragma once

#include <list>
#include <span>
#include <unordered_map>

namespace mcq {

// LRU cache over file ids, most-recent first. Misses do not modify the cache:
// a file enters only when it is actually delivered (insert), since the user
// cannot cache what it has not received.
class LruCache {
 public:
  explicit LruCache(int capacity);

  // hit: file moved to front, returns true. miss: cache unchanged.
  bool access(int file);

  // Insert a delivered file at the front, evicting the rear if full.
  // No-op for capacity 0. Throws std::invalid_argument if already present.
  void insert(int file);

  bool contains(int file) const { return index_.count(file) != 0; }
  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(order_.size()); }
  const std::list<int>& contents() const { return order_; }

 private:
  int capacity_;
  std::list<int> order_;
  std::unordered_map<int, std::list<int>::iterator> index_;
};

// Maddah-Ali style partition placement: every user stores a C/M fraction of
// every file; no request can be met locally.
struct PartitionPlacement {
  int file_count = 0;
  int user_count = 0;
  int cache_capacity = 0;

  double stored_fraction() const {
    return static_cast<double>(cache_capacity) / file_count;
  }
  // coded-caching parameter t = L*C/M
  double coded_parameter() const {
    return static_cast<double>(user_count) * cache_capacity / file_count;
  }
  void validate() const;  // 0 <= C <= M
};

// Che's characteristic time: unique root of sum_i (1 - e^{-lambda_i T}) = C.
// Returns 0 for C = 0; throws no_finite_root_error when C >= the number of
// files with positive rate. Bracketed bisection, residual < 1e-10.
double che_constant(std::span<const double> file_rates, int capacity);

// P_m(i,j) = e^{-lambda_ij * T_C}
double miss_probability(double rate, double che_time);

}  // namespace mcq
