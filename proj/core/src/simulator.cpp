#include "mcq/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>

#include "mcq/cache.hpp"
#include "mcq/errors.hpp"
#include "mcq/queues.hpp"

namespace mcq {

const char* scheme_name(SchemeId scheme) {
  switch (scheme) {
    case SchemeId::Fifo: return "FIFO";
    case SchemeId::Multicast: return "MULTICAST";
    case SchemeId::LruM: return "LRU-M";
    case SchemeId::PcsM: return "PCS-M";
    case SchemeId::MpcsM: return "MPCS-M";
    case SchemeId::Cdls: return "CDLS";
    case SchemeId::CdlsM: return "CDLS-M";
    case SchemeId::UpoM: return "UPO-M";
    case SchemeId::LruCm: return "LRU-CM";
  }
  return "?";
}

bool scheme_uses_lru(SchemeId s) {
  return s == SchemeId::LruM || s == SchemeId::Cdls || s == SchemeId::CdlsM ||
         s == SchemeId::LruCm;
}

bool scheme_uses_partition(SchemeId s) {
  return s == SchemeId::PcsM || s == SchemeId::MpcsM || s == SchemeId::UpoM;
}

Catalog SchemeConfig::catalog() const {
  return Catalog::uniform(file_count, file_time_s);
}

RateMatrix SchemeConfig::rate_matrix() const {
  return build_rate_matrix(file_count, user_count, per_user_rate,
                           zipf_pmf(file_count, zipf_alpha));
}

void SchemeConfig::validate() const {
  if (file_count < 1) throw std::invalid_argument("config: file_count >= 1");
  if (!(file_time_s > 0))
    throw std::invalid_argument("config: file_time_s must be > 0");
  if (user_count < 1) throw std::invalid_argument("config: users >= 1");
  if (per_user_rate < 0)
    throw std::invalid_argument("config: per_user_rate must be >= 0");
  if (zipf_alpha < 0)
    throw std::invalid_argument("config: zipf_alpha must be >= 0");
  if (horizon_events == 0)
    throw std::invalid_argument("config: horizon must be > 0");
  if (warmup_fraction < 0 || warmup_fraction >= 1)
    throw std::invalid_argument("config: warmup fraction must be in [0,1)");
  if (replications < 1)
    throw std::invalid_argument("config: replications must be >= 1");
  if (cache_capacity < 0)
    throw std::invalid_argument("config: cache capacity must be >= 0");
  channel.validate();

  if ((scheme == SchemeId::Fifo || scheme == SchemeId::Multicast) &&
      cache_capacity != 0)
    throw std::invalid_argument(
        "config: FIFO and MULTICAST model cacheless users (capacity 0)");
  if (scheme_uses_partition(scheme)) {
    if (cache_capacity >= file_count)
      throw std::invalid_argument(
          "config: partition placement needs C < M (C = M leaves nothing to "
          "send)");
    if (scheme == SchemeId::UpoM) {
      const double t =
          static_cast<double>(user_count) * cache_capacity / file_count;
      if (std::abs(t - std::lround(t)) > 1e-9)
        throw unsupported_configuration_error(
            "config: UPO-M needs integer t = LC/M");
    }
  }
  if (channel.kind != ChannelKind::ErrorFree && scheme != SchemeId::Fifo &&
      scheme != SchemeId::Multicast && scheme != SchemeId::LruM)
    throw std::invalid_argument(
        "config: fading channels are supported for FIFO, MULTICAST and LRU-M "
        "only");
  if (channel.kind == ChannelKind::RetransmitFixedRate &&
      !(channel.resolve_success_prob(file_time_s) > 0))
    throw std::invalid_argument("config: retransmit success probability is 0");
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

struct TraceHasher {
  std::uint64_t h = kFnvOffset;
  void mix(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= kFnvPrime;
    }
  }
  void mix_time(double t) {
    std::uint64_t bits;
    std::memcpy(&bits, &t, sizeof bits);
    mix(bits);
  }
};

enum : int { kDeparture = 0, kArrival = 1 };  // departures first on time ties

struct Event {
  double time;
  int kind;
  std::uint64_t seq;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.kind != b.kind) return a.kind > b.kind;
    return a.seq > b.seq;
  }
};

class Engine {
 public:
  Engine(const SchemeConfig& cfg, int replication)
      : cfg_(cfg),
        catalog_(cfg.catalog()),
        rates_(cfg.rate_matrix()),
        traffic_rng_(cfg.seed, static_cast<std::uint64_t>(replication) * 4),
        channel_rng_(cfg.seed, static_cast<std::uint64_t>(replication) * 4 + 1),
        generator_(rates_),
        shared_queue_(cfg.scheme != SchemeId::Fifo),
        user_queues_(cfg.user_count, cfg.scheme != SchemeId::Cdls) {
    if (scheme_uses_lru(cfg.scheme))
      caches_.assign(cfg.user_count, LruCache(cfg.cache_capacity));
    placement_ = {cfg.file_count, cfg.user_count, cfg.cache_capacity};
    if (cfg.channel.kind == ChannelKind::RetransmitFixedRate)
      success_prob_ = cfg.channel.resolve_success_prob(cfg.file_time_s);
    warmup_seq_ = static_cast<std::uint64_t>(
        std::floor(cfg.warmup_fraction *
                   static_cast<double>(cfg.horizon_events)));
    sojourn_by_seq_.assign(
        cfg.horizon_events, std::numeric_limits<double>::quiet_NaN());
    per_file_sum_.assign(cfg.file_count, 0.0);
    per_file_count_.assign(cfg.file_count, 0);
    per_user_sum_.assign(cfg.user_count, 0.0);
    per_user_count_.assign(cfg.user_count, 0);
  }

  DelayStats run() {
    schedule_next_arrival();
    while (!events_.empty()) {
      const Event ev = events_.top();
      events_.pop();
      if (ev.kind == kArrival)
        on_arrival();
      else
        on_departure(ev.time);
    }
    return finalize();
  }

 private:
  bool uses_shared_queue() const {
    return cfg_.scheme == SchemeId::Fifo || cfg_.scheme == SchemeId::Multicast ||
           cfg_.scheme == SchemeId::LruM || cfg_.scheme == SchemeId::LruCm;
  }

  void schedule_next_arrival() {
    if (generated_ >= cfg_.horizon_events) return;
    auto ev = generator_.next(traffic_rng_);
    if (!ev) return;
    ++generated_;
    pending_ = *ev;
    events_.push(Event{ev->time, kArrival, generated_});
  }

  std::size_t waiting_requests() const {
    return uses_shared_queue() ? shared_queue_.waiting_requests()
                               : user_queues_.waiting_requests();
  }

  void on_arrival() {
    const RequestEvent req = pending_;
    const std::uint64_t seq = arrivals_++;
    queue_len_samples_.push_back(
        static_cast<double>(waiting_requests()));

    bool forwarded = true;
    if (!caches_.empty() && caches_[req.user].access(req.file)) {
      ++hits_;
      record_sojourn(seq, 0.0, req.file, req.user);
      trace_arrival(req, 0);
      forwarded = false;
    }
    if (forwarded) {
      const Requester r{req.user, req.time, seq};
      MergeOutcome outcome;
      std::size_t entries;
      if (uses_shared_queue()) {
        outcome = shared_queue_.enqueue(req.file, r);
        entries = shared_queue_.waiting_entries();
      } else {
        outcome = user_queues_.enqueue(req.user, req.file, r);
        entries = user_queues_.waiting_entries(req.user);
      }
      max_queue_entries_ = std::max(max_queue_entries_, entries);
      if (outcome == MergeOutcome::NewEntry)
        ++type1_;
      else
        ++type2_;
      trace_arrival(req, outcome == MergeOutcome::NewEntry ? 1 : 2);
    }
    if (!busy_) try_start(req.time);
    schedule_next_arrival();
  }

  ServiceDecision select(double now) {
    ServiceDecision d;
    switch (cfg_.scheme) {
      case SchemeId::Fifo:
      case SchemeId::Multicast:
      case SchemeId::LruM: {
        const QueueEntry* head = shared_queue_.head();
        if (!head) return d;
        d.kind = DecisionKind::Uncoded;
        d.service_time = catalog_.file_times[head->file];
        d.served.push_back({-1, *head});
        return d;
      }
      case SchemeId::LruCm:
        return lrucm_select(shared_queue_, caches_, cfg_.file_time_s);
      case SchemeId::Cdls:
      case SchemeId::CdlsM:
        return cdls_select(user_queues_, caches_, now, cfg_.file_time_s);
      case SchemeId::PcsM:
        return pcsm_batch(user_queues_, PcsVariant::DummyPadded, placement_,
                          cfg_.file_time_s);
      case SchemeId::MpcsM:
        return pcsm_batch(user_queues_, PcsVariant::NonEmptyOnly, placement_,
                          cfg_.file_time_s);
      case SchemeId::UpoM:
        return upo_batch(user_queues_, placement_, cfg_.file_time_s);
    }
    return d;
  }

  void pop_selected(const ServiceDecision& d) {
    if (uses_shared_queue()) {
      shared_queue_.pop_head();
      shared_queue_.begin_service(d.served.front().entry.file);
      if (d.serves_after_head) {
        // the entry right after the old head is the head now
        shared_queue_.pop_head();
        shared_queue_.begin_service(d.served.back().entry.file);
      }
    } else {
      for (const auto& s : d.served) {
        const QueueEntry popped = user_queues_.pop_head(s.queue_user);
        if (popped.file != s.entry.file)
          throw std::logic_error("engine: decision does not match queue head");
      }
    }
  }

  void check_decodable(const ServiceDecision& d) {
    if (d.kind != DecisionKind::CodedPair) return;
    // each served user must hold the complementary file of the XOR
    const int file_a = d.served[0].entry.file;
    const int file_b = d.served[1].entry.file;
    for (const auto& s : d.served) {
      const int other = s.entry.file == file_a ? file_b : file_a;
      for (int u : s.entry.distinct_users())
        if (!caches_[u].contains(other))
          throw std::logic_error("engine: undecodable coded pair");
    }
  }

  void try_start(double now) {
    if (busy_) return;
    ServiceDecision d = select(now);
    if (d.idle()) return;
    pop_selected(d);
    check_decodable(d);
    begin_service(std::move(d), now);
  }

  void begin_service(ServiceDecision d, double now) {
    double duration = d.service_time;
    active_completions_.assign(d.served.size(), {});
    for (std::size_t k = 0; k < d.served.size(); ++k)
      active_completions_[k].assign(d.served[k].entry.requesters.size(), 0.0);

    const bool plain_transmission = d.kind == DecisionKind::Uncoded &&
                                    d.served.size() == 1 &&
                                    cfg_.channel.kind != ChannelKind::ErrorFree;
    if (plain_transmission) {
      const QueueEntry& entry = d.served.front().entry;
      const double s = catalog_.file_times[entry.file];
      const auto users = entry.distinct_users();
      if (cfg_.channel.kind == ChannelKind::RetransmitFixedRate) {
        const std::vector<double> probs(users.size(), success_prob_);
        const auto rounds = draw_decode_rounds(probs, channel_rng_);
        int max_round = 0;
        for (int r : rounds) max_round = std::max(max_round, r);
        duration = max_round * s;
        for (std::size_t idx = 0; idx < entry.requesters.size(); ++idx) {
          const int u = entry.requesters[idx].user;
          const auto pos =
              std::lower_bound(users.begin(), users.end(), u) - users.begin();
          active_completions_[0][idx] = now + rounds[pos] * s;
        }
      } else {  // worst-rate: gains redrawn per transmission, per user
        std::vector<double> gains(users.size());
        for (double& g : gains) g = channel_rng_.exponential(1.0);
        duration = worst_rate_service_time(
            gains, cfg_.channel.resolved_file_bits(s), cfg_.channel.snr,
            cfg_.channel.bandwidth_hz);
        for (auto& c : active_completions_[0]) c = now + duration;
      }
    } else {
      for (std::size_t k = 0; k < d.served.size(); ++k)
        for (auto& c : active_completions_[k]) c = now + duration;
    }
    if (!(duration > 0)) throw std::logic_error("engine: zero service time");

    // queuing delay ends at service start
    for (std::size_t k = 0; k < d.served.size(); ++k) {
      const QueueEntry& entry = d.served[k].entry;
      for (std::size_t idx = 0; idx < entry.requesters.size(); ++idx) {
        const Requester& r = entry.requesters[idx];
        record_queue_delay(r.seq, now - r.arrival_time, entry.file, r.user,
                           idx == 0);
      }
    }

    ++transmissions_;
    if (d.kind == DecisionKind::CodedPair) ++coded_transmissions_;
    trace_service(now, d, duration);

    busy_ = true;
    active_ = std::move(d);
    events_.push(Event{now + duration, kDeparture, transmissions_});
  }

  void on_departure(double now) {
    for (std::size_t k = 0; k < active_.served.size(); ++k) {
      const QueueEntry& entry = active_.served[k].entry;
      for (std::size_t idx = 0; idx < entry.requesters.size(); ++idx) {
        const Requester& r = entry.requesters[idx];
        record_sojourn(r.seq, active_completions_[k][idx] - r.arrival_time,
                       entry.file, r.user);
      }
      if (!caches_.empty()) {
        for (int u : entry.distinct_users()) {
          if (caches_[u].contains(entry.file))
            caches_[u].access(entry.file);
          else
            caches_[u].insert(entry.file);
        }
      }
      ++served_entries_;
      served_requests_ += entry.requesters.size();
    }
    if (uses_shared_queue()) shared_queue_.finish_service();
    busy_ = false;
    hash_.mix(0xDE);
    hash_.mix_time(now);
    try_start(now);
  }

  void record_sojourn(std::uint64_t seq, double value, int file, int user) {
    sojourn_by_seq_[seq] = value;
    if (cfg_.metric == Metric::Sojourn && seq >= warmup_seq_) {
      per_file_sum_[file] += value;
      ++per_file_count_[file];
      per_user_sum_[user] += value;
      ++per_user_count_[user];
    }
  }

  void record_queue_delay(std::uint64_t seq, double value, int file, int user,
                          bool is_type1) {
    queue_delays_.emplace_back(seq, value);
    max_queue_delay_ = std::max(max_queue_delay_, value);
    if (seq >= warmup_seq_) {
      if (is_type1) {
        type1_delay_sum_ += value;
        ++type1_delay_count_;
      }
      if (cfg_.metric == Metric::QueuingDelay) {
        per_file_sum_[file] += value;
        ++per_file_count_[file];
        per_user_sum_[user] += value;
        ++per_user_count_[user];
      }
    }
  }

  void trace_arrival(const RequestEvent& req, int outcome) {
    hash_.mix(0xA1);
    hash_.mix_time(req.time);
    hash_.mix(static_cast<std::uint64_t>(req.file));
    hash_.mix(static_cast<std::uint64_t>(req.user));
    hash_.mix(static_cast<std::uint64_t>(outcome));
  }

  void trace_service(double now, const ServiceDecision& d, double duration) {
    hash_.mix(0x57);
    hash_.mix_time(now);
    hash_.mix(static_cast<std::uint64_t>(d.kind));
    hash_.mix_time(duration);
    for (std::size_t k = 0; k < d.served.size(); ++k) {
      const auto& s = d.served[k];
      hash_.mix(static_cast<std::uint64_t>(s.entry.file));
      hash_.mix(static_cast<std::uint64_t>(s.entry.requesters.size()));
      for (std::size_t idx = 0; idx < s.entry.requesters.size(); ++idx) {
        hash_.mix(static_cast<std::uint64_t>(s.entry.requesters[idx].user));
        hash_.mix_time(active_completions_[k][idx]);
      }
    }
  }

  DelayStats finalize() {
    DelayStats out;
    out.arrivals = arrivals_;
    out.hits = hits_;
    out.type1 = type1_;
    out.type2 = type2_;
    out.served_entries = served_entries_;
    out.served_requests = served_requests_;
    out.transmissions = transmissions_;
    out.coded_transmissions = coded_transmissions_;
    out.max_queue_entries = max_queue_entries_;
    out.max_queue_delay_s = max_queue_delay_;
    out.horizon_time_s = generator_.clock();

    if (arrivals_ != hits_ + type1_ + type2_)
      throw std::logic_error("engine: arrival conservation violated");
    if (served_requests_ != type1_ + type2_ || waiting_requests() != 0 ||
        busy_)
      throw std::logic_error("engine: served-request conservation violated");
    for (std::uint64_t i = 0; i < arrivals_; ++i)
      if (std::isnan(sojourn_by_seq_[i]))
        throw std::logic_error("engine: request without recorded sojourn");

    // post-warmup means
    double sj_sum = 0;
    std::uint64_t sj_n = 0;
    for (std::uint64_t i = post_warmup_begin(); i < arrivals_; ++i) {
      sj_sum += sojourn_by_seq_[i];
      ++sj_n;
    }
    out.mean_sojourn_s = sj_n ? sj_sum / sj_n : 0.0;

    std::sort(queue_delays_.begin(), queue_delays_.end());
    std::vector<double> queued;
    queued.reserve(queue_delays_.size());
    for (const auto& [seq, v] : queue_delays_)
      if (seq >= warmup_seq_) queued.push_back(v);
    double qd_sum = 0;
    for (double v : queued) qd_sum += v;
    out.mean_queue_delay_s = queued.empty() ? 0.0 : qd_sum / queued.size();
    out.mean_type1_delay_s =
        type1_delay_count_ ? type1_delay_sum_ / type1_delay_count_ : 0.0;

    std::vector<double> metric_samples;
    if (cfg_.metric == Metric::Sojourn) {
      metric_samples.assign(sojourn_by_seq_.begin() + post_warmup_begin(),
                            sojourn_by_seq_.begin() + arrivals_);
    } else {
      metric_samples = std::move(queued);
    }
    const BatchMeansResult bm = batch_means(metric_samples, 20);
    out.mean_delay_s = bm.mean;
    out.variance = bm.variance;
    out.ci95_half_width = bm.ci95_half_width;

    out.per_file_mean.assign(cfg_.file_count, 0.0);
    for (int i = 0; i < cfg_.file_count; ++i)
      if (per_file_count_[i])
        out.per_file_mean[i] = per_file_sum_[i] / per_file_count_[i];
    out.per_user_mean.assign(cfg_.user_count, 0.0);
    for (int j = 0; j < cfg_.user_count; ++j)
      if (per_user_count_[j])
        out.per_user_mean[j] = per_user_sum_[j] / per_user_count_[j];

    // queue-growth trend over 20 windows of the arrival-sampled queue length
    if (queue_len_samples_.size() >= 40) {
      const int windows = 20;
      const std::size_t per = queue_len_samples_.size() / windows;
      std::vector<double> means(windows, 0.0);
      for (int w = 0; w < windows; ++w) {
        const std::size_t lo = w * per;
        const std::size_t hi =
            w == windows - 1 ? queue_len_samples_.size() : lo + per;
        double sum = 0;
        for (std::size_t i = lo; i < hi; ++i) sum += queue_len_samples_[i];
        means[w] = sum / (hi - lo);
      }
      out.unstable = growth_trend(means);
    }

    out.trace_hash = hash_.h;
    return out;
  }

  std::uint64_t post_warmup_begin() const {
    return std::min(warmup_seq_, arrivals_);
  }

  const SchemeConfig& cfg_;
  Catalog catalog_;
  RateMatrix rates_;
  Rng traffic_rng_;
  Rng channel_rng_;
  RequestGenerator generator_;

  MulticastQueue shared_queue_;
  PerUserQueues user_queues_;
  std::vector<LruCache> caches_;
  PartitionPlacement placement_;
  double success_prob_ = 1.0;

  std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
  RequestEvent pending_;
  bool busy_ = false;
  ServiceDecision active_;
  std::vector<std::vector<double>> active_completions_;

  std::uint64_t generated_ = 0;
  std::uint64_t arrivals_ = 0;
  std::uint64_t hits_ = 0;
  std::uint64_t type1_ = 0;
  std::uint64_t type2_ = 0;
  std::uint64_t served_entries_ = 0;
  std::uint64_t served_requests_ = 0;
  std::uint64_t transmissions_ = 0;
  std::uint64_t coded_transmissions_ = 0;
  std::size_t max_queue_entries_ = 0;
  double max_queue_delay_ = 0;
  std::uint64_t warmup_seq_ = 0;

  std::vector<double> sojourn_by_seq_;
  std::vector<std::pair<std::uint64_t, double>> queue_delays_;
  double type1_delay_sum_ = 0;
  std::uint64_t type1_delay_count_ = 0;
  std::vector<double> per_file_sum_;
  std::vector<std::uint64_t> per_file_count_;
  std::vector<double> per_user_sum_;
  std::vector<std::uint64_t> per_user_count_;
  std::vector<double> queue_len_samples_;
  TraceHasher hash_;
};

}  // namespace

DelayStats run_replication(const SchemeConfig& config, int replication) {
  config.validate();
  Engine engine(config, replication);
  return engine.run();
}

std::vector<DelayStats> run_replications(const SchemeConfig& config,
                                         int threads) {
  config.validate();
  std::vector<DelayStats> out(config.replications);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < out.size();
         i = next.fetch_add(1))
      out[i] = run_replication(config, static_cast<int>(i));
  };
  const int n = std::max(1, std::min<int>(threads, config.replications));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

DelayStats aggregate(const std::vector<DelayStats>& reps) {
  if (reps.empty()) throw std::invalid_argument("aggregate: no replications");
  DelayStats out;
  const std::size_t n = reps.size();
  out.per_file_mean.assign(reps.front().per_file_mean.size(), 0.0);
  out.per_user_mean.assign(reps.front().per_user_mean.size(), 0.0);
  TraceHasher hash;
  std::vector<double> rep_means;
  rep_means.reserve(n);
  for (const auto& r : reps) {
    out.mean_delay_s += r.mean_delay_s / n;
    out.mean_sojourn_s += r.mean_sojourn_s / n;
    out.mean_queue_delay_s += r.mean_queue_delay_s / n;
    out.mean_type1_delay_s += r.mean_type1_delay_s / n;
    out.variance += r.variance / n;
    out.arrivals += r.arrivals;
    out.hits += r.hits;
    out.type1 += r.type1;
    out.type2 += r.type2;
    out.served_entries += r.served_entries;
    out.served_requests += r.served_requests;
    out.transmissions += r.transmissions;
    out.coded_transmissions += r.coded_transmissions;
    out.max_queue_entries = std::max(out.max_queue_entries, r.max_queue_entries);
    out.max_queue_delay_s = std::max(out.max_queue_delay_s, r.max_queue_delay_s);
    out.unstable = out.unstable || r.unstable;
    out.horizon_time_s = std::max(out.horizon_time_s, r.horizon_time_s);
    for (std::size_t i = 0; i < out.per_file_mean.size(); ++i)
      out.per_file_mean[i] += r.per_file_mean[i] / n;
    for (std::size_t i = 0; i < out.per_user_mean.size(); ++i)
      out.per_user_mean[i] += r.per_user_mean[i] / n;
    hash.mix(r.trace_hash);
    rep_means.push_back(r.mean_delay_s);
  }
  if (n == 1) {
    out.ci95_half_width = reps.front().ci95_half_width;
  } else {
    double mean = out.mean_delay_s, var = 0;
    for (double m : rep_means) var += (m - mean) * (m - mean);
    var /= (n - 1);
    out.ci95_half_width =
        student_t_975(static_cast<int>(n) - 1) * std::sqrt(var / n);
  }
  out.trace_hash = hash.h;
  return out;
}

DelayStats run(const SchemeConfig& config) {
  return aggregate(run_replications(config, 1));
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "user_count") return SweepAxis::UserCount;
  if (name == "per_user_rate") return SweepAxis::PerUserRate;
  if (name == "C") return SweepAxis::CacheCapacity;
  if (name == "alpha") return SweepAxis::ZipfAlpha;
  if (name == "snr") return SweepAxis::Snr;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

const char* sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::UserCount: return "user_count";
    case SweepAxis::PerUserRate: return "per_user_rate";
    case SweepAxis::CacheCapacity: return "C";
    case SweepAxis::ZipfAlpha: return "alpha";
    case SweepAxis::Snr: return "snr";
  }
  return "?";
}

SchemeConfig with_axis_value(const SchemeConfig& base, SweepAxis axis,
                             double value) {
  SchemeConfig cfg = base;
  switch (axis) {
    case SweepAxis::UserCount:
      cfg.user_count = static_cast<int>(std::llround(value));
      break;
    case SweepAxis::PerUserRate:
      cfg.per_user_rate = value;
      break;
    case SweepAxis::CacheCapacity:
      cfg.cache_capacity = static_cast<int>(std::llround(value));
      break;
    case SweepAxis::ZipfAlpha:
      cfg.zipf_alpha = value;
      break;
    case SweepAxis::Snr:
      cfg.channel.snr = value;
      break;
  }
  return cfg;
}

std::vector<SweepPoint> sweep(const SchemeConfig& base, SweepAxis axis,
                              std::span<const double> values, int threads) {
  if (values.empty()) throw std::invalid_argument("sweep: no values");
  std::vector<SweepPoint> out(values.size());
  std::vector<SchemeConfig> configs;
  configs.reserve(values.size());
  for (double v : values) {
    configs.push_back(with_axis_value(base, axis, v));
    configs.back().validate();
  }
  const std::size_t tasks = values.size() * base.replications;
  for (std::size_t p = 0; p < values.size(); ++p) {
    out[p].value = values[p];
    out[p].replications.resize(base.replications);
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < tasks; i = next.fetch_add(1)) {
      const std::size_t p = i / base.replications;
      const int rep = static_cast<int>(i % base.replications);
      out[p].replications[rep] = run_replication(configs[p], rep);
    }
  };
  const int n =
      std::max(1, std::min(threads, static_cast<int>(tasks)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& point : out) point.stats = aggregate(point.replications);
  return out;
}

}  // namespace mcq
