#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mcq/cache.hpp"
#include "mcq/errors.hpp"
#include "mcq/rng.hpp"
#include "mcq/traffic.hpp"

using namespace mcq;

namespace {

std::vector<int> as_vector(const LruCache& c) {
  return {c.contents().begin(), c.contents().end()};
}

}  // namespace

TEST_CASE("lru access: hit refreshes, miss leaves the cache alone") {
  LruCache c(2);
  c.insert(7);
  c.insert(2);  // contents [2,7]
  CHECK(as_vector(c) == std::vector<int>{2, 7});

  CHECK(c.access(2));
  CHECK(as_vector(c) == std::vector<int>{2, 7});
  CHECK(c.access(7));
  CHECK(as_vector(c) == std::vector<int>{7, 2});
  CHECK_FALSE(c.access(5));
  CHECK(as_vector(c) == std::vector<int>{7, 2});
}

TEST_CASE("lru insert: front insertion with rear eviction") {
  LruCache c(2);
  c.insert(7);
  c.insert(2);
  c.insert(5);  // evicts 7
  CHECK(as_vector(c) == std::vector<int>{5, 2});

  LruCache partial(2);
  partial.insert(2);
  partial.insert(5);
  CHECK(as_vector(partial) == std::vector<int>{5, 2});

  LruCache empty(0);
  empty.insert(5);
  CHECK(empty.size() == 0);

  LruCache dup(3);
  dup.insert(1);
  CHECK_THROWS_AS(dup.insert(1), std::invalid_argument);
}

TEST_CASE("lru tracks a brute-force most-recent list on random sequences") {
  for (int capacity : {1, 3, 8}) {
    LruCache cache(capacity);
    std::vector<int> oracle;  // most-recent first
    Rng rng(42 + capacity, 0);
    for (int step = 0; step < 10000; ++step) {
      const int file = static_cast<int>(rng.uniform() * 20);
      const auto it = std::find(oracle.begin(), oracle.end(), file);
      if (rng.uniform() < 0.5) {
        const bool hit = cache.access(file);
        CHECK(hit == (it != oracle.end()));
        if (it != oracle.end()) {
          oracle.erase(it);
          oracle.insert(oracle.begin(), file);
        }
      } else if (it == oracle.end()) {
        cache.insert(file);
        oracle.insert(oracle.begin(), file);
        if (static_cast<int>(oracle.size()) > capacity) oracle.pop_back();
      }
      REQUIRE(static_cast<int>(cache.size()) <= capacity);
      REQUIRE(as_vector(cache) == oracle);
    }
  }
}

TEST_CASE("che constant: closed form and error cases") {
  const std::vector<double> ones{1.0, 1.0, 1.0};
  CHECK(che_constant(ones, 2) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-9));
  CHECK(che_constant(ones, 0) == 0.0);
  const std::vector<double> two{1.0, 1.0};
  CHECK_THROWS_AS(che_constant(two, 2), no_finite_root_error);
  CHECK_THROWS_AS(che_constant(two, -1), std::invalid_argument);
}

TEST_CASE("che constant: residual below 1e-10 on random instances") {
  Rng rng(9, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + static_cast<int>(rng.uniform() * 60);
    std::vector<double> rates(m);
    for (double& r : rates) r = 0.01 + rng.uniform() * 5;
    const int c = 1 + static_cast<int>(rng.uniform() * (m - 1));
    const double t = che_constant(rates, c);
    double filled = 0;
    for (double r : rates) filled += 1 - std::exp(-r * t);
    CHECK(std::abs(filled - c) < 1e-10);
  }
}

TEST_CASE("miss probability") {
  CHECK(miss_probability(0.0, 3.0) == doctest::Approx(1.0));
  CHECK(miss_probability(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(miss_probability(std::log(2.0), 1.0) == doctest::Approx(0.5));
}

TEST_CASE("partition placement parameter") {
  PartitionPlacement p{100, 10, 40};
  p.validate();
  CHECK(p.stored_fraction() == doctest::Approx(0.4));
  CHECK(p.coded_parameter() == doctest::Approx(4.0));
  PartitionPlacement bad{100, 10, 101};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

// An isolated cache fed directly by Poisson request streams should match
// Che's approximation: long-run miss rate of file i close to e^{-lambda_i T_C}.
TEST_CASE("lru miss rates track the Che approximation (M=50, C=10)") {
  const int m = 50, capacity = 10;
  const auto pmf = zipf_pmf(m, 1.0);
  std::vector<double> rates(m);
  for (int i = 0; i < m; ++i) rates[i] = 0.6 * pmf[i];
  const double tc = che_constant(rates, capacity);

  RateMatrix matrix;
  matrix.file_count = m;
  matrix.user_count = 1;
  matrix.rates = rates;
  RequestGenerator gen(matrix);
  Rng rng(13, 0);
  LruCache cache(capacity);
  std::vector<long> requests(m, 0), misses(m, 0);
  for (int step = 0; step < 1000000; ++step) {
    const auto ev = gen.next(rng);
    ++requests[ev->file];
    if (!cache.access(ev->file)) {
      ++misses[ev->file];
      cache.insert(ev->file);  // instantaneous fetch in this experiment
    }
  }
  for (int file : {0, 4, 9, 24}) {
    const double predicted = miss_probability(rates[file], tc);
    const double observed =
        static_cast<double>(misses[file]) / requests[file];
    CHECK(observed == doctest::Approx(predicted).epsilon(0.10));
  }
}
