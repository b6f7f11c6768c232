#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace als {

struct MailboxPayload {
  std::int64_t cost = 0;
  int origin = -1;  // rank that produced the configuration
  std::vector<int> values;
};

/** One-sided communication slot: a single writer deposits configurations, a
 *  single reader polls them, neither ever blocks.
 *
 *  Writes follow a versioned double-buffer protocol: the version counter is
 *  bumped to odd, the payload is stored, then the counter is bumped back to
 *  even. A reader accepts a payload only when the version read before and
 *  after the copy is the same even value, so torn payloads are never
 *  observed. Version 0 means nothing was ever written. */
class MailboxSlot {
 public:
  explicit MailboxSlot(int size)
      : size_(size), values_(std::make_unique<std::atomic<int>[]>(size)) {
    for (int i = 0; i < size_; ++i) values_[i].store(0, std::memory_order_relaxed);
  }

  int size() const { return size_; }

  void write(std::span<const int> values, std::int64_t cost, int origin) {
    const std::uint64_t v = version_.load(std::memory_order_relaxed);
    version_.store(v + 1, std::memory_order_relaxed);
    std::atomic_thread_fence(std::memory_order_release);
    cost_.store(cost, std::memory_order_relaxed);
    origin_.store(origin, std::memory_order_relaxed);
    for (int i = 0; i < size_; ++i) values_[i].store(values[i], std::memory_order_relaxed);
    version_.store(v + 2, std::memory_order_release);
  }

  enum class ReadStatus { Empty, Torn, Ok };

  /** Single read attempt; on Ok, `out` holds a consistent payload and
   *  `version_out` the even version it was published under. */
  ReadStatus try_read(MailboxPayload& out, std::uint64_t& version_out) const {
    const std::uint64_t v1 = version_.load(std::memory_order_acquire);
    if (v1 == 0) return ReadStatus::Empty;
    if (v1 & 1) return ReadStatus::Torn;
    out.cost = cost_.load(std::memory_order_relaxed);
    out.origin = origin_.load(std::memory_order_relaxed);
    out.values.resize(size_);
    for (int i = 0; i < size_; ++i) out.values[i] = values_[i].load(std::memory_order_relaxed);
    std::atomic_thread_fence(std::memory_order_acquire);
    const std::uint64_t v2 = version_.load(std::memory_order_relaxed);
    if (v1 != v2) return ReadStatus::Torn;
    version_out = v1;
    return ReadStatus::Ok;
  }

 private:
  int size_;
  std::atomic<std::uint64_t> version_{0};
  std::atomic<std::int64_t> cost_{0};
  std::atomic<int> origin_{-1};
  std::unique_ptr<std::atomic<int>[]> values_;
};

/** Set-once global flag announcing that some worker found a solution.
 *  First writer wins; the winning rank, its iteration count and its
 *  solution are published for the coordinator to read after the join. */
class TerminationBoard {
 public:
  bool is_set() const { return state_.load(std::memory_order_acquire) != 0; }
  bool has_winner() const { return state_.load(std::memory_order_acquire) == 2; }

  bool try_publish(int rank, std::uint64_t iterations, std::span<const int> values,
                   std::int64_t cost) {
    int expected = 0;
    if (!state_.compare_exchange_strong(expected, 1, std::memory_order_acq_rel))
      return false;
    winner_rank_ = rank;
    winner_iterations_ = iterations;
    winner_cost_ = cost;
    solution_.assign(values.begin(), values.end());
    if (progress_probe_ != nullptr) {
      progress_at_set_.resize(progress_probe_->size());
      for (std::size_t i = 0; i < progress_probe_->size(); ++i)
        progress_at_set_[i] = (*progress_probe_)[i].load(std::memory_order_relaxed);
    }
    state_.store(2, std::memory_order_release);
    return true;
  }

  // Instrumentation: when attached, every worker's iteration counter is
  // snapshotted at the instant the board is claimed.
  void attach_progress(const std::vector<std::atomic<std::uint64_t>>* probe) {
    progress_probe_ = probe;
  }

  // Valid only once has_winner() holds (always true after joining workers
  // when any of them solved).
  int winner_rank() const { return winner_rank_; }
  std::uint64_t winner_iterations() const { return winner_iterations_; }
  std::int64_t winner_cost() const { return winner_cost_; }
  const std::vector<int>& solution() const { return solution_; }
  const std::vector<std::uint64_t>& progress_at_set() const { return progress_at_set_; }

 private:
  std::atomic<int> state_{0};  // 0 open, 1 claimed, 2 published
  int winner_rank_ = -1;
  std::uint64_t winner_iterations_ = 0;
  std::int64_t winner_cost_ = 0;
  std::vector<int> solution_;
  const std::vector<std::atomic<std::uint64_t>>* progress_probe_ = nullptr;
  std::vector<std::uint64_t> progress_at_set_;
};

}  // namespace als
