#include "mcq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mcq/cache.hpp"
#include "mcq/channel.hpp"
#include "mcq/errors.hpp"
#include "mcq/queues.hpp"

namespace mcq {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct ServiceLaw {
  // per-file service moments conditioned on the file being served:
  // first[i] = E[S | file i], second[i] = E[S^2 | file i]
  std::vector<double> first;
  std::vector<double> second;
};

ServiceLaw plain_service_law(const Catalog& catalog) {
  ServiceLaw law;
  law.first = catalog.file_times;
  law.second.reserve(law.first.size());
  for (double s : law.first) law.second.push_back(s * s);
  return law;
}

struct MixState {
  double rho = 0;
  double es = 0;
  double es2 = 0;
  double eff_sum = 0;
};

// Moments of the entry service mix at delay d: the effective (post-merge)
// arrival rate of file i is lambda_i/(1+lambda_i d), and the entry being
// served is file i with probability proportional to that rate.
MixState mix_at(std::span<const double> rates, const ServiceLaw& law,
                double d) {
  MixState m;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (rates[i] <= 0) continue;
    const double eff = rates[i] / (1.0 + rates[i] * d);
    m.eff_sum += eff;
    m.rho += eff * law.first[i];
    m.es += eff * law.first[i];
    m.es2 += eff * law.second[i];
  }
  if (m.eff_sum > 0) {
    m.es /= m.eff_sum;
    m.es2 /= m.eff_sum;
  }
  return m;
}

double pk_value(const MixState& m, BracketMode mode) {
  if (m.rho >= 1.0) return kInf;
  const double base = m.rho / (1.0 - m.rho);
  if (mode == BracketMode::UtilizationOnly) return base;
  const double var = std::max(0.0, m.es2 - m.es * m.es);
  return base * (m.es / 2.0 + var / (2.0 * m.es));
}

FixedPointSolution zero_solution(std::size_t file_count, BracketMode mode) {
  FixedPointSolution s;
  s.mode = mode;
  s.effective_rates.assign(file_count, 0.0);
  return s;
}

// Root of f(d) = d where f(d) is the PK expression over the d-dependent mix.
// f is strictly decreasing past the stability threshold d0 (rho(d0) = 1), so
// the root is unique and bracketed bisection is safe.
FixedPointSolution solve_fixed_point(std::span<const double> rates,
                                     const ServiceLaw& law, BracketMode mode) {
  FixedPointSolution out;
  out.mode = mode;

  double total = 0;
  for (double r : rates) {
    if (r < 0 || !std::isfinite(r))
      throw std::invalid_argument("fixed point: rates must be finite, >= 0");
    total += r;
  }
  if (total == 0) return zero_solution(rates.size(), mode);

  auto g = [&](double d) { return pk_value(mix_at(rates, law, d), mode) - d; };

  // stability threshold
  double lo = 0;
  if (mix_at(rates, law, 0).rho >= 1.0) {
    double hi0 = 1.0;
    while (mix_at(rates, law, hi0).rho >= 1.0) hi0 *= 2;
    double lo0 = 0;
    for (int i = 0; i < 200 && hi0 - lo0 > 1e-14 * hi0; ++i) {
      const double mid = 0.5 * (lo0 + hi0);
      (mix_at(rates, law, mid).rho >= 1.0 ? lo0 : hi0) = mid;
    }
    lo = hi0;  // first point with rho < 1
  }

  if (g(lo) <= 0) {  // light traffic: root at or below lo
    out.delay = lo;
  } else {
    double hi = std::max(2.0 * lo, 1.0);
    while (g(hi) > 0) hi *= 2;
    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < 500; ++i) {
      mid = 0.5 * (lo + hi);
      const double val = g(mid);
      if (std::abs(val) < kResidualTol) break;
      (val > 0 ? lo : hi) = mid;
    }
    out.delay = mid;
  }

  const MixState m = mix_at(rates, law, out.delay);
  out.utilization = m.rho;
  out.residual = std::abs(g(out.delay));
  out.effective_rates.resize(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i)
    out.effective_rates[i] = rates[i] / (1.0 + rates[i] * out.delay);
  return out;
}

}  // namespace

std::optional<double> fifo_mean_delay(const RateMatrix& rates,
                                      const Catalog& catalog) {
  rates.validate();
  catalog.validate();
  if (rates.file_count != catalog.file_count())
    throw std::invalid_argument("fifo_mean_delay: catalog size mismatch");
  const double total = rates.total_rate();
  if (total == 0) return 0.0;

  double es = 0, es2 = 0;
  for (int i = 0; i < rates.file_count; ++i) {
    const double w = rates.file_rate(i) / total;
    es += w * catalog.file_times[i];
    es2 += w * catalog.file_times[i] * catalog.file_times[i];
  }
  const double rho = total * es;
  if (rho >= 1.0) return std::nullopt;
  const double var = std::max(0.0, es2 - es * es);
  return rho / (1.0 - rho) * (es / 2.0 + var / (2.0 * es));
}

FixedPointSolution multicast_fixed_point(std::span<const double> file_rates,
                                         const Catalog& catalog,
                                         BracketMode mode) {
  catalog.validate();
  if (file_rates.size() != catalog.file_times.size())
    throw std::invalid_argument("multicast_fixed_point: size mismatch");
  return solve_fixed_point(file_rates, plain_service_law(catalog), mode);
}

double per_file_mean_delay(double rate, double effective_rate, double delay) {
  if (!(rate > 0))
    throw std::invalid_argument("per_file_mean_delay: undefined for rate 0");
  if (effective_rate <= 0 || effective_rate > rate * (1 + 1e-12))
    throw std::invalid_argument(
        "per_file_mean_delay: need 0 < lambda' <= lambda");
  return (effective_rate * delay + (rate - effective_rate) * delay / 2.0) /
         rate;
}

double mixture_mean_delay(std::span<const double> file_rates,
                          const FixedPointSolution& solution) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < file_rates.size(); ++i) {
    if (file_rates[i] <= 0) continue;
    num += file_rates[i] * per_file_mean_delay(file_rates[i],
                                               solution.effective_rates[i],
                                               solution.delay);
    den += file_rates[i];
  }
  return den > 0 ? num / den : 0.0;
}

std::vector<double> lru_miss_rates(const RateMatrix& rates, int capacity) {
  rates.validate();
  if (capacity < 0)
    throw std::invalid_argument("lru_miss_rates: capacity must be >= 0");
  std::vector<double> miss_rates(rates.file_count, 0.0);
  for (int j = 0; j < rates.user_count; ++j) {
    const auto user_rates = rates.user_file_rates(j);
    int positive = 0;
    for (double r : user_rates)
      if (r > 0) ++positive;
    if (positive == 0) continue;
    if (capacity >= positive) continue;  // this cache holds everything: all hit
    const double tc =
        capacity == 0 ? 0.0 : che_constant(user_rates, capacity);
    for (int i = 0; i < rates.file_count; ++i)
      miss_rates[i] += user_rates[i] * miss_probability(user_rates[i], tc);
  }
  return miss_rates;
}

FixedPointSolution lru_fed_fixed_point(const RateMatrix& rates, int capacity,
                                       const Catalog& catalog,
                                       BracketMode mode) {
  return multicast_fixed_point(lru_miss_rates(rates, capacity), catalog, mode);
}

namespace {

// E[N] and E[N^2] of the transmission count for a fixed requester set,
// N = max of independent geometric(r_j): E[N^p] = sum_n ((n+1)^p - n^p)(1-F(n)).
void transmission_moments(std::span<const double> probs, double& en,
                          double& en2) {
  en = 0;
  en2 = 0;
  for (int n = 0;; ++n) {
    double cdf = 1.0;
    for (double r : probs) cdf *= 1.0 - std::pow(1.0 - r, n);
    const double tail = 1.0 - cdf;
    en += tail;
    en2 += (2.0 * n + 1.0) * tail;
    if (n > 0 && tail < 1e-13) break;
    if (n > 100000)
      throw nonconvergence_error("transmission_moments: tail does not decay");
  }
}

}  // namespace

FixedPointSolution fading_fixed_point(const RateMatrix& rates,
                                      std::span<const double> success_probs,
                                      const Catalog& catalog,
                                      BracketMode mode) {
  rates.validate();
  catalog.validate();
  const int L = rates.user_count;
  const int M = rates.file_count;
  if (static_cast<int>(success_probs.size()) != L)
    throw std::invalid_argument("fading_fixed_point: r_j size mismatch");
  for (double r : success_probs)
    if (!(r > 0) || r > 1)
      throw std::invalid_argument("fading_fixed_point: r_j must be in (0,1]");

  const auto file_rates = rates.file_rates();
  double total = 0;
  for (double r : file_rates) total += r;
  if (total == 0) return zero_solution(file_rates.size(), mode);

  // uniform shortcut: homogeneous users and equal r admit a size-based law
  bool uniform = true;
  for (double r : success_probs)
    if (r != success_probs[0]) uniform = false;
  for (int i = 0; i < M && uniform; ++i)
    for (int j = 1; j < L; ++j)
      if (rates.at(i, j) != rates.at(i, 0)) {
        uniform = false;
        break;
      }

  std::vector<double> en_by_size, en2_by_size;  // uniform path, index = |set|
  std::vector<double> en_by_mask, en2_by_mask;  // exact path over subsets
  const bool exact = L <= 15;
  if (uniform) {
    en_by_size.resize(L + 1);
    en2_by_size.resize(L + 1);
    std::vector<double> probs;
    for (int m = 1; m <= L; ++m) {
      probs.assign(m, success_probs[0]);
      transmission_moments(probs, en_by_size[m], en2_by_size[m]);
    }
  } else if (exact) {
    const std::size_t masks = std::size_t{1} << L;
    en_by_mask.resize(masks);
    en2_by_mask.resize(masks);
    std::vector<double> probs;
    for (std::size_t mask = 1; mask < masks; ++mask) {
      probs.clear();
      for (int j = 0; j < L; ++j)
        if (mask & (std::size_t{1} << j)) probs.push_back(success_probs[j]);
      transmission_moments(probs, en_by_mask[mask], en2_by_mask[mask]);
    }
  }

  Rng mc_rng(0x6d63u, 7);  // Monte Carlo path for L > 15

  // Service moments per file at queue delay d: origin user j with probability
  // lambda_ij/lambda_i, every other user merged independently with
  // probability q_ik = 1 - e^{-lambda_ik d}.
  auto law_at = [&](double d) {
    ServiceLaw law;
    law.first.assign(M, 0.0);
    law.second.assign(M, 0.0);
    std::vector<double> q(L);
    for (int i = 0; i < M; ++i) {
      const double li = file_rates[i];
      if (li <= 0) continue;
      for (int k = 0; k < L; ++k)
        q[k] = 1.0 - std::exp(-rates.at(i, k) * d);
      double en_i = 0, en2_i = 0;
      for (int j = 0; j < L; ++j) {
        const double pj = rates.at(i, j) / li;
        if (pj <= 0) continue;
        double en_o = 0, en2_o = 0;
        if (uniform) {
          // binomial over merged-set sizes
          const int others = L - 1;
          double choose = 1.0;
          for (int m = 0; m <= others; ++m) {
            const double pm = choose * std::pow(q[0], m) *
                              std::pow(1.0 - q[0], others - m);
            en_o += pm * en_by_size[m + 1];
            en2_o += pm * en2_by_size[m + 1];
            choose *= static_cast<double>(others - m) / (m + 1);
          }
        } else if (exact) {
          const std::size_t self = std::size_t{1} << j;
          const std::size_t all = (std::size_t{1} << L) - 1;
          const std::size_t rest = all & ~self;
          // iterate subsets of the other users
          std::size_t sub = 0;
          while (true) {
            double p = 1.0;
            for (int k = 0; k < L; ++k) {
              if (k == j) continue;
              const bool in = sub & (std::size_t{1} << k);
              p *= in ? q[k] : 1.0 - q[k];
            }
            en_o += p * en_by_mask[sub | self];
            en2_o += p * en2_by_mask[sub | self];
            if (sub == rest) break;
            sub = (sub - rest) & rest;  // next subset of rest
          }
        } else {
          // Monte Carlo over merged sets
          constexpr int kSamples = 100000;
          std::vector<double> probs;
          for (int s = 0; s < kSamples; ++s) {
            probs.clear();
            probs.push_back(success_probs[j]);
            for (int k = 0; k < L; ++k)
              if (k != j && mc_rng.uniform() < q[k])
                probs.push_back(success_probs[k]);
            double en_s = 0, en2_s = 0;
            transmission_moments(probs, en_s, en2_s);
            en_o += en_s;
            en2_o += en2_s;
          }
          en_o /= kSamples;
          en2_o /= kSamples;
        }
        en_i += pj * en_o;
        en2_i += pj * en2_o;
      }
      const double s = catalog.file_times[i];
      law.first[i] = s * en_i;
      law.second[i] = s * s * en2_i;
    }
    return law;
  };

  double d = 0;
  std::ostringstream trace;
  const int max_iters = 500;
  for (int iter = 0; iter < max_iters; ++iter) {
    const ServiceLaw law = law_at(d);
    const FixedPointSolution inner = solve_fixed_point(file_rates, law, mode);
    trace << (iter ? " " : "") << inner.delay;
    if (std::abs(inner.delay - d) < 1e-8) {
      FixedPointSolution out = inner;
      out.residual = std::abs(pk_value(mix_at(file_rates, law, out.delay),
                                       mode) -
                              out.delay);
      return out;
    }
    d = 0.5 * (d + inner.delay);  // damped update
  }
  throw nonconvergence_error("fading_fixed_point: no convergence; iterates: " +
                             trace.str());
}

std::vector<FixedPointSolution> coded_per_user_fixed_point(
    const RateMatrix& rates, int cache_capacity, const Catalog& catalog) {
  rates.validate();
  catalog.validate();
  if (!catalog.equal_sizes())
    throw std::invalid_argument(
        "coded_per_user_fixed_point: equal file sizes required");
  const double s =
      pcs_service_time(rates.user_count, cache_capacity, rates.file_count,
                       catalog.file_times.front());

  std::vector<FixedPointSolution> out;
  out.reserve(rates.user_count);
  ServiceLaw law;
  law.first.assign(rates.file_count, s);
  law.second.assign(rates.file_count, s * s);  // deterministic: Var[S] = 0
  for (int j = 0; j < rates.user_count; ++j) {
    const auto user_rates = rates.user_file_rates(j);
    out.push_back(
        solve_fixed_point(user_rates, law, BracketMode::PkFull));
  }
  return out;
}

}  // namespace mcq
