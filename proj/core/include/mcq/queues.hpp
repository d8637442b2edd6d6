#pragma once

#include <cstdint>
#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

#include "mcq/cache.hpp"

namespace mcq {

struct Requester {
  int user = 0;
  double arrival_time = 0;
  std::uint64_t seq = 0;  // arrival index, for delay bookkeeping
};

// One pending transmission: a file plus every not-yet-served request for it.
// requesters.front() is the type-1 request that created the entry.
struct QueueEntry {
  int file = -1;
  double enqueue_time = 0;
  std::vector<Requester> requesters;

  std::vector<int> distinct_users() const;
};

// type-1: created a new entry; type-2: merged into a waiting entry
enum class MergeOutcome { NewEntry, Merged };

// Multicast request queue. New requests for a file already waiting are merged
// into its entry; a file currently in service gets a fresh tail entry (the
// requester has missed part of the ongoing transmission). With merging the
// waiting length can never exceed the catalog size. merge_requests=false
// degenerates to a plain FIFO of single-request entries.
class MulticastQueue {
 public:
  explicit MulticastQueue(bool merge_requests = true)
      : merge_(merge_requests) {}

  MergeOutcome enqueue(int file, const Requester& r);

  bool has_waiting() const { return !waiting_.empty(); }
  std::size_t waiting_entries() const { return waiting_.size(); }
  std::size_t waiting_requests() const { return waiting_requests_; }

  const QueueEntry* head() const;
  const QueueEntry* after_head() const;

  // Pop the head (or the entry right after it) for service.
  QueueEntry pop_head();
  QueueEntry pop_after_head();

  void begin_service(int file) { in_service_files_.push_back(file); }
  void finish_service() { in_service_files_.clear(); }
  bool in_service() const { return !in_service_files_.empty(); }

 private:
  void unindex(std::list<QueueEntry>::iterator it);

  bool merge_;
  std::list<QueueEntry> waiting_;
  std::unordered_map<int, std::list<QueueEntry>::iterator> by_file_;
  std::vector<int> in_service_files_;
  std::size_t waiting_requests_ = 0;
};

// One queue per user; merging (if enabled) applies within each user's queue,
// on file id.
class PerUserQueues {
 public:
  PerUserQueues(int user_count, bool merge_requests);

  MergeOutcome enqueue(int user, int file, const Requester& r);

  int user_count() const { return static_cast<int>(queues_.size()); }
  int nonempty_count() const;
  bool any_waiting() const;
  const QueueEntry* head(int user) const { return queues_[user].head(); }
  QueueEntry pop_head(int user) { return queues_[user].pop_head(); }
  std::size_t waiting_requests() const;
  std::size_t waiting_entries(int user) const {
    return queues_[user].waiting_entries();
  }

 private:
  std::vector<MulticastQueue> queues_;
};

enum class DecisionKind {
  Idle,
  Uncoded,
  CodedPair,
  CodedBatch,
  DummyPaddedBatch,
};

struct ServedEntry {
  int queue_user = -1;  // owning per-user queue; -1 for the shared queue
  QueueEntry entry;
};

// Scheduler output: which entries leave the queues and how long the
// transmission lasts. Selectors are pure; the simulation applies the decision.
struct ServiceDecision {
  DecisionKind kind = DecisionKind::Idle;
  double service_time = 0;  // seconds; > 0 unless idle
  std::vector<ServedEntry> served;
  bool serves_after_head = false;  // shared-queue coded pair (head + next)

  bool idle() const { return kind == DecisionKind::Idle; }
  std::size_t request_count() const;
};

// Deterministic per-batch service time of the partition-coded delivery, in
// seconds: l(1-C/M)/(1+Cl/M) file transmission times. l = 0 yields 0 (idle).
double pcs_service_time(int active_users, int cache_capacity, int file_count,
                        double file_time_s = 1.0);

// Normalized delivery rate (in file transmission times) of the
// uncoded-prefetch-optimal scheme for a batch of K users demanding
// distinct_files distinct files, placement parameter t = LC/M (integer):
// [binom(K,t+1) - binom(K-distinct_files,t+1)] / binom(K,t).
double upo_rate(int batch_users, int coded_parameter_t, int distinct_files);

// Coded delivery with LRU side information: serve a mutually decodable pair
// of head-of-line requests in one file time if one exists (largest combined
// waiting time wins), otherwise the longest-waiting head; an uncoded
// transmission also serves every other head requesting the same file.
ServiceDecision cdls_select(const PerUserQueues& queues,
                            const std::vector<LruCache>& caches, double now,
                            double file_time_s);

// Shared-queue variant: check the head entry against the one immediately
// after it; serve both in one file time when every involved user can decode,
// picking whichever option serves more users (ties favor uncoded).
ServiceDecision lrucm_select(const MulticastQueue& queue,
                             const std::vector<LruCache>& caches,
                             double file_time_s);

enum class PcsVariant {
  DummyPadded,   // every queue contributes a slot; empty ones get dummies
  NonEmptyOnly,  // only the l nonempty heads are served, at rate s(l)
};

ServiceDecision pcsm_batch(const PerUserQueues& queues, PcsVariant variant,
                           const PartitionPlacement& placement,
                           double file_time_s);

// Batch of all queue heads with dummy padding, served at the
// uncoded-prefetch-optimal rate for the distinct files actually demanded.
ServiceDecision upo_batch(const PerUserQueues& queues,
                          const PartitionPlacement& placement,
                          double file_time_s);

}  // namespace mcq
