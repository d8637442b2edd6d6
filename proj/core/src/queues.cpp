#include "mcq/queues.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mcq/errors.hpp"

namespace mcq {

std::vector<int> QueueEntry::distinct_users() const {
  std::vector<int> users;
  users.reserve(requesters.size());
  for (const auto& r : requesters) users.push_back(r.user);
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());
  return users;
}

MergeOutcome MulticastQueue::enqueue(int file, const Requester& r) {
  ++waiting_requests_;
  if (merge_) {
    auto it = by_file_.find(file);
    if (it != by_file_.end()) {
      it->second->requesters.push_back(r);
      return MergeOutcome::Merged;
    }
  }
  waiting_.push_back(QueueEntry{file, r.arrival_time, {r}});
  if (merge_) by_file_.emplace(file, std::prev(waiting_.end()));
  return MergeOutcome::NewEntry;
}

const QueueEntry* MulticastQueue::head() const {
  return waiting_.empty() ? nullptr : &waiting_.front();
}

const QueueEntry* MulticastQueue::after_head() const {
  if (waiting_.size() < 2) return nullptr;
  return &*std::next(waiting_.begin());
}

void MulticastQueue::unindex(std::list<QueueEntry>::iterator it) {
  waiting_requests_ -= it->requesters.size();
  if (merge_) by_file_.erase(it->file);
}

QueueEntry MulticastQueue::pop_head() {
  if (waiting_.empty()) throw std::logic_error("multicast queue: pop on empty");
  auto it = waiting_.begin();
  unindex(it);
  QueueEntry entry = std::move(*it);
  waiting_.erase(it);
  return entry;
}

QueueEntry MulticastQueue::pop_after_head() {
  if (waiting_.size() < 2)
    throw std::logic_error("multicast queue: no entry after head");
  auto it = std::next(waiting_.begin());
  unindex(it);
  QueueEntry entry = std::move(*it);
  waiting_.erase(it);
  return entry;
}

PerUserQueues::PerUserQueues(int user_count, bool merge_requests) {
  if (user_count < 1)
    throw std::invalid_argument("per-user queues: need at least one user");
  queues_.assign(static_cast<std::size_t>(user_count),
                 MulticastQueue(merge_requests));
}

MergeOutcome PerUserQueues::enqueue(int user, int file, const Requester& r) {
  return queues_[user].enqueue(file, r);
}

int PerUserQueues::nonempty_count() const {
  int n = 0;
  for (const auto& q : queues_)
    if (q.has_waiting()) ++n;
  return n;
}

bool PerUserQueues::any_waiting() const {
  for (const auto& q : queues_)
    if (q.has_waiting()) return true;
  return false;
}

std::size_t PerUserQueues::waiting_requests() const {
  std::size_t n = 0;
  for (const auto& q : queues_) n += q.waiting_requests();
  return n;
}

std::size_t ServiceDecision::request_count() const {
  std::size_t n = 0;
  for (const auto& s : served) n += s.entry.requesters.size();
  return n;
}

double pcs_service_time(int active_users, int cache_capacity, int file_count,
                        double file_time_s) {
  if (file_count < 1)
    throw std::invalid_argument("pcs_service_time: file count must be >= 1");
  if (cache_capacity < 0 || cache_capacity > file_count)
    throw std::invalid_argument("pcs_service_time: need 0 <= C <= M");
  if (active_users < 0)
    throw std::invalid_argument("pcs_service_time: negative user count");
  if (active_users == 0) return 0.0;  // idle
  const double ratio = static_cast<double>(cache_capacity) / file_count;
  const double l = static_cast<double>(active_users);
  return file_time_s * l * (1.0 - ratio) / (1.0 + ratio * l);
}

namespace {

// binom(n,k) as a double; 0 for n < k (out-of-range subsets do not exist)
double binom(int n, int k) {
  if (k < 0 || n < 0 || n < k) return 0.0;
  double result = 1.0;
  for (int i = 0; i < k; ++i)
    result *= static_cast<double>(n - i) / static_cast<double>(i + 1);
  return result;
}

}  // namespace

double upo_rate(int batch_users, int coded_parameter_t, int distinct_files) {
  if (batch_users < 1)
    throw std::invalid_argument("upo_rate: batch must have users");
  if (coded_parameter_t < 0 || coded_parameter_t > batch_users)
    throw std::invalid_argument("upo_rate: need 0 <= t <= K");
  if (distinct_files < 1 || distinct_files > batch_users)
    throw std::invalid_argument("upo_rate: need 1 <= Ne <= K");
  const double denom = binom(batch_users, coded_parameter_t);
  return (binom(batch_users, coded_parameter_t + 1) -
          binom(batch_users - distinct_files, coded_parameter_t + 1)) /
         denom;
}

ServiceDecision cdls_select(const PerUserQueues& queues,
                            const std::vector<LruCache>& caches, double now,
                            double file_time_s) {
  const int L = queues.user_count();
  std::vector<int> active;
  for (int u = 0; u < L; ++u)
    if (queues.head(u)) active.push_back(u);
  if (active.empty()) return {};

  // mutually decodable pair of heads, largest combined waiting time first
  int best_u = -1, best_v = -1;
  double best_wait = -1;
  for (std::size_t a = 0; a < active.size(); ++a) {
    for (std::size_t b = a + 1; b < active.size(); ++b) {
      const int u = active[a], v = active[b];
      const QueueEntry* eu = queues.head(u);
      const QueueEntry* ev = queues.head(v);
      if (eu->file == ev->file) continue;  // plain multicast covers this
      if (!caches[u].contains(ev->file) || !caches[v].contains(eu->file))
        continue;
      const double wait =
          (now - eu->enqueue_time) + (now - ev->enqueue_time);
      if (wait > best_wait) {
        best_wait = wait;
        best_u = u;
        best_v = v;
      }
    }
  }
  ServiceDecision d;
  d.service_time = file_time_s;
  if (best_u >= 0) {
    d.kind = DecisionKind::CodedPair;
    d.served.push_back({best_u, *queues.head(best_u)});
    d.served.push_back({best_v, *queues.head(best_v)});
    // multicast-by-file: any other head demanding one of the pair's files is
    // served by the same transmission when it can decode the XOR
    const int file_u = queues.head(best_u)->file;
    const int file_v = queues.head(best_v)->file;
    for (int w : active) {
      if (w == best_u || w == best_v) continue;
      const QueueEntry* e = queues.head(w);
      if (e->file == file_u && caches[w].contains(file_v))
        d.served.push_back({w, *e});
      else if (e->file == file_v && caches[w].contains(file_u))
        d.served.push_back({w, *e});
    }
    return d;
  }

  // longest-waiting head; one transmission serves every head for that file
  int pick = active.front();
  for (int u : active)
    if (queues.head(u)->enqueue_time < queues.head(pick)->enqueue_time)
      pick = u;
  const int file = queues.head(pick)->file;
  d.kind = DecisionKind::Uncoded;
  for (int u : active)
    if (queues.head(u)->file == file) d.served.push_back({u, *queues.head(u)});
  return d;
}

namespace {

bool all_cache(const std::vector<int>& users,
               const std::vector<LruCache>& caches, int file) {
  for (int u : users)
    if (!caches[u].contains(file)) return false;
  return true;
}

}  // namespace

ServiceDecision lrucm_select(const MulticastQueue& queue,
                             const std::vector<LruCache>& caches,
                             double file_time_s) {
  const QueueEntry* head = queue.head();
  if (!head) return {};
  ServiceDecision d;
  d.kind = DecisionKind::Uncoded;
  d.service_time = file_time_s;
  d.served.push_back({-1, *head});

  const QueueEntry* next = queue.after_head();
  if (!next) return d;
  const auto head_users = head->distinct_users();
  const auto next_users = next->distinct_users();
  if (!all_cache(head_users, caches, next->file) ||
      !all_cache(next_users, caches, head->file))
    return d;
  // coded XOR serves both entries in one file time; pick the option serving
  // more users, ties to uncoded
  if (head_users.size() + next_users.size() <= head_users.size()) return d;
  d.kind = DecisionKind::CodedPair;
  d.serves_after_head = true;
  d.served.push_back({-1, *next});
  return d;
}

ServiceDecision pcsm_batch(const PerUserQueues& queues, PcsVariant variant,
                           const PartitionPlacement& placement,
                           double file_time_s) {
  placement.validate();
  const int L = queues.user_count();
  ServiceDecision d;
  int active = 0;
  for (int u = 0; u < L; ++u) {
    if (const QueueEntry* e = queues.head(u)) {
      d.served.push_back({u, *e});
      ++active;
    }
  }
  if (active == 0) return {};
  const int slots = variant == PcsVariant::DummyPadded ? L : active;
  d.kind = variant == PcsVariant::DummyPadded ? DecisionKind::DummyPaddedBatch
                                              : DecisionKind::CodedBatch;
  d.service_time = pcs_service_time(slots, placement.cache_capacity,
                                    placement.file_count, file_time_s);
  return d;
}

ServiceDecision upo_batch(const PerUserQueues& queues,
                          const PartitionPlacement& placement,
                          double file_time_s) {
  placement.validate();
  const double t_real = placement.coded_parameter();
  const int t = static_cast<int>(std::lround(t_real));
  if (std::abs(t_real - t) > 1e-9)
    throw unsupported_configuration_error(
        "upo: coded parameter t = LC/M must be an integer");

  ServiceDecision d;
  std::vector<int> files;
  for (int u = 0; u < queues.user_count(); ++u) {
    if (const QueueEntry* e = queues.head(u)) {
      d.served.push_back({u, *e});
      files.push_back(e->file);
    }
  }
  if (d.served.empty()) return {};
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  // dummy demands at empty queues add no distinct files
  d.kind = DecisionKind::DummyPaddedBatch;
  d.service_time =
      upo_rate(queues.user_count(), t, static_cast<int>(files.size())) *
      file_time_s;
  return d;
}

}  // namespace mcq
