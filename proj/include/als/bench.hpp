#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "als/engine.hpp"
#include "als/problem.hpp"
#include "als/report.hpp"
#include "als/rng.hpp"
#include "als/runtime.hpp"

namespace als {

enum class RunVariant { Seq, Tdo, Poc };

inline const char* to_string(RunVariant v) {
  switch (v) {
    case RunVariant::Seq: return "seq";
    case RunVariant::Tdo: return "tdo";
    case RunVariant::Poc: return "poc";
  }
  return "?";
}

inline std::optional<RunVariant> parse_variant(std::string_view name) {
  if (name == "seq") return RunVariant::Seq;
  if (name == "tdo") return RunVariant::Tdo;
  if (name == "poc") return RunVariant::Poc;
  return std::nullopt;
}

/** Engine fields changed from the per-kind defaults. */
struct EngineOverrides {
  std::optional<int> tabu_tenure;
  std::optional<int> reset_limit;
  std::optional<double> reset_fraction;
  std::optional<std::uint64_t> max_iterations;
  std::optional<int> max_restarts;
  std::optional<EscapePolicy> escape;

  EngineParams apply(EngineParams p) const {
    if (tabu_tenure) p.tabu_tenure = *tabu_tenure;
    if (reset_limit) p.reset_limit = *reset_limit;
    if (reset_fraction) p.reset_fraction = *reset_fraction;
    if (max_iterations) p.max_iterations = *max_iterations;
    if (max_restarts) p.max_restarts = *max_restarts;
    if (escape) p.escape = *escape;
    return p;
  }
};

struct ExperimentConfig {
  ProblemKind kind = ProblemKind::CostasArray;
  int n = 10;
  RunVariant variant = RunVariant::Seq;
  int workers = 1;
  int arity = 2;
  std::vector<std::uint64_t> k_values = {100};  // one batch per value
  int runs = 100;
  std::uint64_t master_seed = 1;
  EngineOverrides overrides;
};

inline void validate(const ExperimentConfig& c) {
  if (c.n < min_size(c.kind))
    throw std::invalid_argument(std::string(to_string(c.kind)) + " requires n >= " +
                                std::to_string(min_size(c.kind)));
  if (c.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (c.workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (c.arity < 1) throw std::invalid_argument("arity must be >= 1");
  if (c.k_values.empty()) throw std::invalid_argument("at least one k value required");
  for (std::uint64_t k : c.k_values)
    if (k == 0) throw std::invalid_argument("k must be >= 1");
  if (c.variant != RunVariant::Seq && c.workers < 1)
    throw std::invalid_argument("parallel variants need workers >= 1");
}

/** One timed run. Seeds are derived as master_seed xor run_id * odd
 *  constant (see derive_seed), so run trajectories are independent and the
 *  whole batch is reproducible from the master seed. */
inline RunRecord run_single(const ProblemSpec& spec, const ExperimentConfig& config,
                            std::uint64_t k, int run_id) {
  EngineParams ep = config.overrides.apply(default_params(spec));
  ep.comm_interval_k = k;
  ep.seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(run_id));

  RunRecord rec;
  rec.run_id = run_id;
  rec.problem = to_string(spec.kind);
  rec.n = spec.n;
  rec.variant = to_string(config.variant);
  rec.workers = config.variant == RunVariant::Seq ? 1 : config.workers;
  rec.k = k;
  rec.seed = ep.seed;

  if (config.variant == RunVariant::Seq) {
    const SolveOutcome outcome = solve(spec, ep);
    rec.solved = outcome.solved;
    rec.wall_ms = outcome.stats.wall_seconds * 1e3;
    rec.iterations = outcome.stats.iterations;
    rec.local_minima = outcome.stats.local_minima;
    rec.resets = outcome.stats.resets;
    rec.restarts = outcome.stats.restarts;
    rec.same_var_avg = outcome.stats.same_var_per_iteration();
    rec.winner_rank = outcome.solved ? 0 : -1;
  } else {
    ParallelParams pp;
    pp.variant =
        config.variant == RunVariant::Tdo ? ParallelVariant::Tdo : ParallelVariant::Poc;
    pp.num_workers = config.workers;
    pp.arity = config.arity;
    const ParallelOutcome outcome = run_parallel(spec, ep, pp);
    rec.solved = outcome.solved;
    rec.wall_ms = outcome.wall_seconds * 1e3;
    rec.winner_rank = outcome.winner_rank;
    const RunStats& stats =
        outcome.solved ? outcome.worker_stats[outcome.winner_rank] : outcome.worker_stats[0];
    rec.iterations = stats.iterations;
    rec.local_minima = stats.local_minima;
    rec.resets = stats.resets;
    rec.restarts = stats.restarts;
    rec.same_var_avg = stats.same_var_per_iteration();
    rec.adoptions = outcome.adoptions;
    rec.propagations = outcome.propagations;
  }
  return rec;
}

struct BatchResult {
  std::vector<RunRecord> rows;
  std::vector<std::pair<std::uint64_t, Aggregate>> aggregates;  // one per k value
};

/** Run R independent repetitions per k value, one configuration at a time
 *  (the harness itself never runs two measurements concurrently). Failed
 *  runs are recorded with solved=0 and never abort the batch. */
inline BatchResult run_batch(const ExperimentConfig& config) {
  validate(config);
  const ProblemSpec spec = build_problem(config.kind, config.n);
  BatchResult result;
  for (std::uint64_t k : config.k_values) {
    std::vector<RunRecord> rows;
    rows.reserve(config.runs);
    for (int run = 0; run < config.runs; ++run)
      rows.push_back(run_single(spec, config, k, run));
    result.aggregates.emplace_back(k, aggregate_rows(rows));
    for (auto& row : rows) result.rows.push_back(std::move(row));
  }
  return result;
}

/** Mean run-characterization figures for one instance, collected over
 *  sequential runs (solved runs only). */
struct CharacterizationRow {
  std::string problem;
  int n = 0;
  int runs = 0;
  int solved = 0;
  double iterations = 0.0;
  double local_minima = 0.0;
  double resets = 0.0;
  double restarts = 0.0;
  double same_var = 0.0;
};

inline CharacterizationRow characterize(ProblemKind kind, int n, int runs,
                                        std::uint64_t master_seed,
                                        const EngineOverrides& overrides = {}) {
  const ProblemSpec spec = build_problem(kind, n);
  CharacterizationRow row;
  row.problem = to_string(kind);
  row.n = n;
  row.runs = runs;
  for (int run = 0; run < runs; ++run) {
    EngineParams ep = overrides.apply(default_params(spec));
    ep.seed = derive_seed(master_seed, static_cast<std::uint64_t>(run));
    const SolveOutcome outcome = solve(spec, ep);
    if (!outcome.solved) continue;
    ++row.solved;
    row.iterations += static_cast<double>(outcome.stats.iterations);
    row.local_minima += static_cast<double>(outcome.stats.local_minima);
    row.resets += static_cast<double>(outcome.stats.resets);
    row.restarts += static_cast<double>(outcome.stats.restarts);
    row.same_var += outcome.stats.same_var_per_iteration();
  }
  if (row.solved > 0) {
    const double s = row.solved;
    row.iterations /= s;
    row.local_minima /= s;
    row.resets /= s;
    row.restarts /= s;
    row.same_var /= s;
  }
  return row;
}

}  // namespace als
