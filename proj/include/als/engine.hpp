#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "als/evaluator.hpp"
#include "als/problem.hpp"
#include "als/rng.hpp"

namespace als {

// What to do when the best move from the worst variable does not improve:
// freeze it and reset only once too many variables are frozen, or reset a
// random slice of the configuration right away.
enum class EscapePolicy { TabuReset, ImmediateReset };

struct EngineParams {
  int tabu_tenure = 10;          // iterations a frozen variable stays out of selection
  int reset_limit = 10;          // simultaneously frozen variables that trigger a reset
  double reset_fraction = 0.1;   // fraction of positions re-shuffled by a reset
  std::uint64_t max_iterations = 1'000'000;  // per restart window
  int max_restarts = 10;
  std::uint64_t comm_interval_k = 100;  // iterations between communication steps
  std::uint64_t seed = 1;
  EscapePolicy escape = EscapePolicy::TabuReset;
};

inline void validate(const EngineParams& p) {
  if (p.tabu_tenure <= 0) throw std::invalid_argument("tabu_tenure must be positive");
  if (p.reset_limit <= 0) throw std::invalid_argument("reset_limit must be positive");
  if (!(p.reset_fraction > 0.0) || p.reset_fraction > 1.0)
    throw std::invalid_argument("reset_fraction must lie in (0, 1]");
  if (p.max_iterations == 0) throw std::invalid_argument("max_iterations must be positive");
  if (p.max_restarts <= 0) throw std::invalid_argument("max_restarts must be positive");
  if (p.comm_interval_k == 0) throw std::invalid_argument("comm_interval_k must be >= 1");
}

/** Tuned per problem kind; every field can be overridden from the CLI. */
inline EngineParams default_params(const ProblemSpec& spec) {
  EngineParams p;
  p.max_iterations = 100'000ULL * static_cast<std::uint64_t>(spec.n);
  p.max_restarts = 10;
  p.comm_interval_k = 100;
  switch (spec.kind) {
    case ProblemKind::MagicSquare:
      p.escape = EscapePolicy::TabuReset;
      p.tabu_tenure = 10;
      p.reset_limit = std::max(2, spec.num_vars / 10);
      p.reset_fraction = 0.1;
      break;
    case ProblemKind::CostasArray:
    case ProblemKind::AllInterval:
      p.escape = EscapePolicy::ImmediateReset;
      p.tabu_tenure = 10;
      p.reset_limit = std::max(2, spec.num_vars / 10);
      p.reset_fraction = 0.1;
      break;
  }
  return p;
}

/** Short-term memory: variables frozen until a given iteration. */
class TabuMemory {
 public:
  explicit TabuMemory(int num_vars) : frozen_until_(num_vars, 0) {}

  bool is_tabu(int var, std::uint64_t now) const { return frozen_until_[var] > now; }
  int tabu_count() const { return count_; }

  void mark(int var, std::uint64_t until) {
    frozen_until_[var] = until;
    queue_.emplace_back(var, until);
    ++count_;
  }

  // Tenure is constant, so entries expire in insertion order.
  void expire(std::uint64_t now) {
    while (!queue_.empty() && queue_.front().second <= now) {
      queue_.pop_front();
      --count_;
    }
  }

  void clear() {
    for (auto& [var, until] : queue_) frozen_until_[var] = 0;
    queue_.clear();
    count_ = 0;
  }

 private:
  std::vector<std::uint64_t> frozen_until_;
  std::deque<std::pair<int, std::uint64_t>> queue_;
  int count_ = 0;
};

struct RunStats {
  std::uint64_t iterations = 0;
  std::uint64_t local_minima = 0;
  std::uint64_t resets = 0;
  std::uint64_t restarts = 0;
  // Sum over iterations of the number of variables tied at the maximal
  // error; divided by iterations this is the "same var / iteration" figure.
  std::uint64_t tie_candidate_sum = 0;
  double wall_seconds = 0.0;

  double same_var_per_iteration() const {
    return iterations == 0 ? 0.0
                           : static_cast<double>(tie_candidate_sum) /
                                 static_cast<double>(iterations);
  }
};

struct CommDirective {
  enum class Kind { Continue, Terminate, Adopt };
  Kind kind = Kind::Continue;
  std::vector<int> values;  // Adopt payload
  std::int64_t cost = 0;

  static CommDirective keep_going() { return {}; }
  static CommDirective terminate() { return {Kind::Terminate, {}, 0}; }
  static CommDirective adopt(std::vector<int> values, std::int64_t cost) {
    return {Kind::Adopt, std::move(values), cost};
  }
};

struct HookContext {
  std::uint64_t iteration;
  std::int64_t cost;
  const std::vector<int>& values;
};

// Invoked every comm_interval_k iterations, plus once when a solution is
// found (so a winning worker can announce it). A default-constructed hook
// means sequential mode.
using CommHook = std::function<CommDirective(const HookContext&)>;

struct SolveOutcome {
  bool solved = false;
  Configuration solution;
  RunStats stats;
  bool terminated_by_peer = false;
};

struct WorstPick {
  int var = -1;  // -1: every variable is frozen
  int tie_count = 0;
};

struct MovePick {
  int partner = -1;
  std::int64_t delta = 0;
};

/** Uniform choice among the non-frozen variables attaining the maximal
 *  error. tie_count reports the size of that argmax set. */
inline WorstPick select_worst_variable(std::span<const std::int64_t> errors,
                                       const TabuMemory& tabu, std::uint64_t now, Rng& rng) {
  WorstPick pick;
  std::int64_t best = -1;
  for (int v = 0; v < static_cast<int>(errors.size()); ++v) {
    if (tabu.is_tabu(v, now)) continue;
    const std::int64_t e = errors[v];
    if (e > best) {
      best = e;
      pick.var = v;
      pick.tie_count = 1;
    } else if (e == best) {
      ++pick.tie_count;
      if (rng.below(static_cast<std::uint64_t>(pick.tie_count)) == 0) pick.var = v;
    }
  }
  return pick;
}

/** Min-conflict move: scan swaps of var with every other position and pick
 *  uniformly among the minimal-delta partners. */
inline MovePick select_min_conflict_move(Evaluator& eval, int var, Rng& rng) {
  MovePick pick;
  int ties = 0;
  for (int p = 0; p < eval.num_vars(); ++p) {
    if (p == var) continue;
    const std::int64_t d = eval.delta_swap(var, p);
    if (pick.partner < 0 || d < pick.delta) {
      pick.partner = p;
      pick.delta = d;
      ties = 1;
    } else if (d == pick.delta) {
      ++ties;
      if (rng.below(static_cast<std::uint64_t>(ties)) == 0) pick.partner = p;
    }
  }
  return pick;
}

/** Re-shuffle ceil(fraction * size) positions, chosen uniformly, among
 *  themselves; all other positions keep their values. A fraction of 1
 *  produces a uniformly random permutation. The subset size is clamped to
 *  at least 2 so a reset always has a chance of changing something. */
inline void partial_reset_values(std::vector<int>& values, double fraction, Rng& rng,
                                 std::vector<int>& index_scratch,
                                 std::vector<int>& value_scratch) {
  const int n = static_cast<int>(values.size());
  if (n < 2) return;
  int m = static_cast<int>(std::ceil(fraction * n));
  m = std::max(2, std::min(m, n));
  if (static_cast<int>(index_scratch.size()) != n) {
    index_scratch.resize(n);
    for (int i = 0; i < n; ++i) index_scratch[i] = i;
  }
  // Partial Fisher-Yates: the first m entries become a uniform m-subset.
  for (int t = 0; t < m; ++t) {
    const int r = t + rng.index(n - t);
    std::swap(index_scratch[t], index_scratch[r]);
  }
  value_scratch.clear();
  for (int t = 0; t < m; ++t) value_scratch.push_back(values[index_scratch[t]]);
  rng.shuffle(value_scratch);
  for (int t = 0; t < m; ++t) values[index_scratch[t]] = value_scratch[t];
}

/** One search engine: owns its configuration, RNG, tabu memory and
 *  statistics. Strictly single-threaded. */
class Engine {
 public:
  Engine(const ProblemSpec& spec, EngineParams params)
      : spec_(&spec),
        params_(params),
        rng_(params.seed),
        eval_(make_evaluator(spec)),
        tabu_(spec.num_vars) {
    validate(params_);
    scratch_values_ = spec.base_domain;
    rng_.shuffle(scratch_values_);
    eval_->reset(scratch_values_);
  }

  bool solved() const { return eval_->cost() == 0; }
  std::int64_t cost() const { return eval_->cost(); }
  const std::vector<int>& values() const { return eval_->values(); }
  const RunStats& stats() const { return stats_; }
  std::uint64_t iteration() const { return stats_.iterations; }
  std::uint64_t window_iterations() const { return window_iterations_; }
  int tabu_count() const { return tabu_.tabu_count(); }
  const EngineParams& params() const { return params_; }
  Evaluator& evaluator() { return *eval_; }

  /** One iteration: project errors, pick the worst variable, try its
   *  min-conflict move; apply it if improving, otherwise record a local
   *  minimum, freeze the variable and run the escape policy. */
  void step() {
    tabu_.expire(stats_.iterations);
    eval_->variable_errors(error_buf_);
    const WorstPick pick = select_worst_variable(error_buf_, tabu_, stats_.iterations, rng_);
    if (pick.var < 0) {
      // Every variable is frozen: forced reset, not counted as an iteration.
      do_partial_reset();
      return;
    }
    stats_.tie_candidate_sum += static_cast<std::uint64_t>(pick.tie_count);
    const MovePick move = select_min_conflict_move(*eval_, pick.var, rng_);
    if (move.delta < 0) {
      eval_->apply_swap(pick.var, move.partner);
    } else {
      ++stats_.local_minima;
      tabu_.mark(pick.var, stats_.iterations + 1 + static_cast<std::uint64_t>(params_.tabu_tenure));
      if (params_.escape == EscapePolicy::ImmediateReset ||
          tabu_.tabu_count() >= params_.reset_limit) {
        do_partial_reset();
      }
    }
    ++stats_.iterations;
    ++window_iterations_;
  }

  /** Replace the configuration when the payload improves strictly on the
   *  current cost; clears tabu memory, keeps iteration counters running. */
  bool adopt(std::span<const int> payload, std::int64_t claimed_cost) {
    if (claimed_cost >= eval_->cost()) return false;  // stale payload
    eval_->reset(payload);
    tabu_.clear();
    return true;
  }

  void restart() {
    scratch_values_ = spec_->base_domain;
    rng_.shuffle(scratch_values_);
    eval_->reset(scratch_values_);
    tabu_.clear();
    ++stats_.restarts;
    window_iterations_ = 0;
  }

 private:
  void do_partial_reset() {
    scratch_values_ = eval_->values();
    partial_reset_values(scratch_values_, params_.reset_fraction, rng_, index_scratch_,
                         value_scratch_);
    eval_->reset(scratch_values_);
    tabu_.clear();
    ++stats_.resets;
  }

  const ProblemSpec* spec_;
  EngineParams params_;
  Rng rng_;
  std::unique_ptr<Evaluator> eval_;
  TabuMemory tabu_;
  RunStats stats_;
  std::uint64_t window_iterations_ = 0;
  std::vector<std::int64_t> error_buf_;
  std::vector<int> scratch_values_;
  std::vector<int> index_scratch_;
  std::vector<int> value_scratch_;
};

/** Run the search until a solution, a Terminate directive, or exhaustion of
 *  the restart budget. With the same spec, params and a no-op hook the
 *  outcome is bit-identical between runs (wall_seconds excepted). */
inline SolveOutcome solve(const ProblemSpec& spec, const EngineParams& params,
                          const CommHook& hook = {},
                          std::atomic<std::uint64_t>* progress = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  Engine engine(spec, params);
  SolveOutcome out;
  std::uint64_t last_comm_iteration = 0;
  for (;;) {
    if (engine.solved()) {
      if (hook) hook({engine.iteration(), engine.cost(), engine.values()});
      out.solved = true;
      break;
    }
    if (engine.window_iterations() >= params.max_iterations) {
      if (engine.stats().restarts >= static_cast<std::uint64_t>(params.max_restarts)) break;
      engine.restart();
      continue;
    }
    if (hook && engine.iteration() - last_comm_iteration >= params.comm_interval_k) {
      last_comm_iteration = engine.iteration();
      const CommDirective directive = hook({engine.iteration(), engine.cost(), engine.values()});
      if (directive.kind == CommDirective::Kind::Terminate) {
        out.terminated_by_peer = true;
        break;
      }
      if (directive.kind == CommDirective::Kind::Adopt)
        engine.adopt(directive.values, directive.cost);
    }
    engine.step();
    if (progress) progress->store(engine.iteration(), std::memory_order_relaxed);
  }
  out.stats = engine.stats();
  out.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.solution.values = engine.values();
  out.solution.cost = engine.cost();
  return out;
}

}  // namespace als
