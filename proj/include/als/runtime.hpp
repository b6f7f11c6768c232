#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "als/engine.hpp"
#include "als/mailbox.hpp"
#include "als/problem.hpp"
#include "als/rng.hpp"
#include "als/topology.hpp"

namespace als {

enum class ParallelVariant { Tdo, Poc };

inline const char* to_string(ParallelVariant v) {
  return v == ParallelVariant::Tdo ? "tdo" : "poc";
}

struct ParallelParams {
  ParallelVariant variant = ParallelVariant::Tdo;
  int num_workers = 1;
  int arity = 2;
};

inline void validate(const ParallelParams& p) {
  if (p.num_workers < 1) throw std::invalid_argument("num_workers must be >= 1");
  if (p.arity < 1) throw std::invalid_argument("arity must be >= 1");
}

struct ParallelOutcome {
  bool solved = false;
  int winner_rank = -1;
  Configuration solution;
  double wall_seconds = 0.0;
  std::vector<RunStats> worker_stats;
  std::uint64_t adoptions = 0;     // configurations taken over from a peer
  std::uint64_t propagations = 0;  // mailbox writes performed
  // Every worker's iteration count at the instant the board was claimed.
  std::vector<std::uint64_t> iterations_at_termination;
};

/** All mailbox slots of a tree run. Each directed edge gets one slot, so
 *  every slot has exactly one writer and one reader. */
struct PocMailboxes {
  TreeTopology topo;
  std::vector<std::unique_ptr<MailboxSlot>> from_parent;  // [r]: written by parent(r)
  std::vector<std::vector<std::unique_ptr<MailboxSlot>>> from_children;  // [r][ci]

  PocMailboxes(TreeTopology t, int num_values) : topo(t) {
    from_parent.resize(topo.num_workers);
    from_children.resize(topo.num_workers);
    for (int r = 0; r < topo.num_workers; ++r) {
      if (r > 0) from_parent[r] = std::make_unique<MailboxSlot>(num_values);
      const int cc = topo.child_count(r);
      for (int ci = 0; ci < cc; ++ci)
        from_children[r].push_back(std::make_unique<MailboxSlot>(num_values));
    }
  }
};

/** Per-worker side of the configuration-propagation scheme.
 *
 *  poll() refreshes the latest payloads deposited by the parent and the
 *  children; exchange() decides what to adopt and what to forward. The two
 *  phases are separate so protocol tests can drive all workers in lockstep
 *  rounds; a live worker simply calls both back to back.
 *
 *  Forwarding follows a wave discipline: the best known configuration is
 *  written in a direction only when its cost beats the last cost sent that
 *  way, or when it was freshly received from the opposite direction. This
 *  lets a new best travel up to the root and back down while equal-cost
 *  payloads quiesce. */
class PocComm {
 public:
  PocComm(PocMailboxes& mail, int rank) : rank_(rank) {
    const TreeTopology& topo = mail.topo;
    const int parent = topo.parent(rank);
    if (parent >= 0) {
      parent_in_.slot = mail.from_parent[rank].get();
      parent_out_ = mail.from_children[parent][rank - topo.first_child(parent)].get();
    }
    const int cc = topo.child_count(rank);
    children_in_.resize(cc);
    children_out_.resize(cc);
    for (int ci = 0; ci < cc; ++ci) {
      children_in_[ci].slot = mail.from_children[rank][ci].get();
      children_out_[ci] = mail.from_parent[topo.first_child(rank) + ci].get();
    }
  }

  /** Read every inbox once; a torn read is retried once and otherwise
   *  skipped until the next step. */
  void poll() {
    poll_inbound(parent_in_);
    for (auto& child : children_in_) poll_inbound(child);
  }

  /** Returns the payload to adopt when a received configuration improves
   *  strictly on the caller's cost; performs the wave-rule sends. */
  std::optional<MailboxPayload> exchange(std::int64_t own_cost,
                                         std::span<const int> own_values) {
    const MailboxPayload* best = nullptr;
    std::int64_t best_cost = own_cost;
    bool best_from_parent = false;
    int best_child = -1;
    if (parent_in_.has && parent_in_.latest.cost < best_cost) {
      best = &parent_in_.latest;
      best_cost = best->cost;
      best_from_parent = true;
    }
    for (std::size_t ci = 0; ci < children_in_.size(); ++ci) {
      const Inbound& child = children_in_[ci];
      if (child.has && child.latest.cost < best_cost) {
        best = &child.latest;
        best_cost = best->cost;
        best_from_parent = false;
        best_child = static_cast<int>(ci);
      }
    }
    const bool fresh_from_child = best_child >= 0 && children_in_[best_child].fresh;
    const bool fresh_from_parent = best != nullptr && best_from_parent && parent_in_.fresh;

    const std::span<const int> send_values = best ? std::span<const int>(best->values)
                                                  : own_values;
    const int origin = best ? best->origin : rank_;
    if (parent_out_ != nullptr && (best_cost < last_sent_up_ || fresh_from_child)) {
      parent_out_->write(send_values, best_cost, origin);
      last_sent_up_ = best_cost;
      ++propagations_;
    }
    if (!children_out_.empty() && (best_cost < last_sent_down_ || fresh_from_parent)) {
      for (MailboxSlot* out : children_out_) {
        out->write(send_values, best_cost, origin);
        ++propagations_;
      }
      last_sent_down_ = best_cost;
    }
    parent_in_.fresh = false;
    for (auto& child : children_in_) child.fresh = false;
    return best ? std::optional<MailboxPayload>(*best) : std::nullopt;
  }

  std::uint64_t propagations() const { return propagations_; }

 private:
  struct Inbound {
    MailboxSlot* slot = nullptr;
    MailboxPayload latest;
    bool has = false;
    bool fresh = false;  // new content observed by the most recent poll
    std::uint64_t seen_version = 0;
  };

  void poll_inbound(Inbound& in) {
    if (in.slot == nullptr) return;
    std::uint64_t version = 0;
    MailboxSlot::ReadStatus status = in.slot->try_read(scratch_, version);
    if (status == MailboxSlot::ReadStatus::Torn)
      status = in.slot->try_read(scratch_, version);  // one retry, then skip
    if (status != MailboxSlot::ReadStatus::Ok) return;
    if (in.has && version == in.seen_version) return;
    std::swap(in.latest, scratch_);
    in.seen_version = version;
    in.has = true;
    in.fresh = true;
  }

  int rank_;
  Inbound parent_in_;
  MailboxSlot* parent_out_ = nullptr;
  std::vector<Inbound> children_in_;
  std::vector<MailboxSlot*> children_out_;
  std::int64_t last_sent_up_ = std::numeric_limits<std::int64_t>::max();
  std::int64_t last_sent_down_ = std::numeric_limits<std::int64_t>::max();
  std::uint64_t propagations_ = 0;
  MailboxPayload scratch_;
};

/** Run P workers over the same problem, each with its own seed stream, and
 *  return once every worker observed termination.
 *
 *  tdo: workers walk independently; the first to solve raises the
 *  termination board and everyone stops at the next communication step.
 *  poc: additionally, configurations propagate along the worker tree and a
 *  strictly better received configuration replaces a worker's own. */
inline ParallelOutcome run_parallel(const ProblemSpec& spec, const EngineParams& engine_params,
                                    const ParallelParams& parallel_params) {
  validate(parallel_params);
  validate(engine_params);
  const int P = parallel_params.num_workers;

  TerminationBoard board;
  std::vector<std::atomic<std::uint64_t>> progress(P);
  board.attach_progress(&progress);

  std::optional<PocMailboxes> mail;
  std::vector<std::unique_ptr<PocComm>> comms(P);
  if (parallel_params.variant == ParallelVariant::Poc) {
    mail.emplace(TreeTopology{P, parallel_params.arity}, spec.num_vars);
    for (int r = 0; r < P; ++r) comms[r] = std::make_unique<PocComm>(*mail, r);
  }

  std::vector<SolveOutcome> results(P);
  std::vector<std::uint64_t> adoptions(P, 0);
  std::vector<std::exception_ptr> failures(P);

  const auto t0 = std::chrono::steady_clock::now();
  {
    std::vector<std::thread> workers;
    workers.reserve(P);
    for (int r = 0; r < P; ++r) {
      workers.emplace_back([&, r] {
        try {
          EngineParams ep = engine_params;
          ep.seed = derive_seed(engine_params.seed, static_cast<std::uint64_t>(r));
          CommHook hook;
          if (parallel_params.variant == ParallelVariant::Tdo) {
            hook = [&board, r](const HookContext& ctx) {
              if (ctx.cost == 0) {
                board.try_publish(r, ctx.iteration, ctx.values, 0);
                return CommDirective::terminate();
              }
              if (board.is_set()) return CommDirective::terminate();
              return CommDirective::keep_going();
            };
          } else {
            PocComm* comm = comms[r].get();
            std::uint64_t* adopted = &adoptions[r];
            hook = [&board, comm, adopted, r](const HookContext& ctx) {
              if (ctx.cost == 0) {
                board.try_publish(r, ctx.iteration, ctx.values, 0);
                return CommDirective::terminate();
              }
              if (board.is_set()) return CommDirective::terminate();
              comm->poll();
              auto incoming = comm->exchange(ctx.cost, ctx.values);
              if (incoming) {
                ++*adopted;
                return CommDirective::adopt(std::move(incoming->values), incoming->cost);
              }
              return CommDirective::keep_going();
            };
          }
          results[r] = solve(spec, ep, hook, &progress[r]);
        } catch (...) {
          failures[r] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  for (auto& failure : failures)
    if (failure) std::rethrow_exception(failure);

  ParallelOutcome out;
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.worker_stats.reserve(P);
  for (const auto& r : results) out.worker_stats.push_back(r.stats);
  for (const auto& a : adoptions) out.adoptions += a;
  for (const auto& comm : comms)
    if (comm) out.propagations += comm->propagations();
  out.iterations_at_termination = board.progress_at_set();

  if (board.has_winner()) {
    out.solved = true;
    out.winner_rank = board.winner_rank();
    out.solution.values = board.solution();
    out.solution.cost = board.winner_cost();
    if (full_cost(spec, out.solution.values) != out.solution.cost)
      throw std::logic_error("published solution does not validate");
  }
  return out;
}

}  // namespace als
