#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace als {

enum class ProblemKind { MagicSquare, CostasArray, AllInterval };

inline const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::MagicSquare: return "magic-square";
    case ProblemKind::CostasArray: return "costas";
    case ProblemKind::AllInterval: return "all-interval";
  }
  return "?";
}

inline std::optional<ProblemKind> parse_problem_kind(std::string_view name) {
  if (name == "magic-square" || name == "magic_square" || name == "ms")
    return ProblemKind::MagicSquare;
  if (name == "costas" || name == "costas-array" || name == "costas_array")
    return ProblemKind::CostasArray;
  if (name == "all-interval" || name == "all_interval" || name == "ai")
    return ProblemKind::AllInterval;
  return std::nullopt;
}

inline int min_size(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::MagicSquare: return 3;
    case ProblemKind::CostasArray: return 2;
    case ProblemKind::AllInterval: return 2;
  }
  return 2;
}

/** A permutation CSP instance.
 *
 *  The solver permutes base_domain over num_vars positions.
 *  constraint_index lists, per position, the ids of the constraints whose
 *  error depends on that position. ProblemSpec is immutable once built and
 *  can be shared freely between workers. */
struct ProblemSpec {
  ProblemKind kind = ProblemKind::MagicSquare;
  int n = 0;
  int num_vars = 0;
  int num_constraints = 0;
  std::int64_t magic_constant = 0;  // n(n^2+1)/2, magic squares only
  std::vector<int> base_domain;     // sorted; the multiset being permuted
  std::vector<std::vector<int>> constraint_index;
};

/** A complete assignment: a permutation of base_domain plus its cached cost.
 *  Invariant: cost equals full_cost(spec, values). */
struct Configuration {
  std::vector<int> values;
  std::int64_t cost = 0;
};

namespace detail {

// Magic-square line ids: rows 0..n-1, columns n..2n-1, main diagonal 2n,
// anti-diagonal 2n+1.
inline bool ms_line_contains(int n, int line, int cell) {
  const int r = cell / n;
  const int c = cell % n;
  if (line < n) return r == line;
  if (line < 2 * n) return c == line - n;
  if (line == 2 * n) return r == c;
  return r + c == n - 1;
}

inline int ms_line_cell(int n, int line, int k) {
  if (line < n) return line * n + k;                 // row
  if (line < 2 * n) return k * n + (line - n);       // column
  if (line == 2 * n) return k * (n + 1);             // main diagonal
  return (k + 1) * (n - 1);                          // anti-diagonal
}

inline std::int64_t ms_line_sum(int n, int line, std::span<const int> values) {
  std::int64_t sum = 0;
  for (int k = 0; k < n; ++k) sum += values[ms_line_cell(n, line, k)];
  return sum;
}

inline std::int64_t count_distinct_sorted(std::vector<int>& buf) {
  if (buf.empty()) return 0;
  std::sort(buf.begin(), buf.end());
  std::int64_t distinct = 1;
  for (std::size_t t = 1; t < buf.size(); ++t)
    if (buf[t] != buf[t - 1]) ++distinct;
  return distinct;
}

}  // namespace detail

inline ProblemSpec build_problem(ProblemKind kind, int n) {
  if (n < min_size(kind))
    throw std::invalid_argument(std::string(to_string(kind)) + " requires n >= " +
                                std::to_string(min_size(kind)) + " (got " + std::to_string(n) +
                                ")");
  ProblemSpec spec;
  spec.kind = kind;
  spec.n = n;
  switch (kind) {
    case ProblemKind::MagicSquare: {
      spec.num_vars = n * n;
      spec.num_constraints = 2 * n + 2;
      spec.magic_constant =
          static_cast<std::int64_t>(n) * (static_cast<std::int64_t>(n) * n + 1) / 2;
      spec.base_domain.resize(spec.num_vars);
      for (int v = 0; v < spec.num_vars; ++v) spec.base_domain[v] = v + 1;
      spec.constraint_index.resize(spec.num_vars);
      for (int cell = 0; cell < spec.num_vars; ++cell) {
        const int r = cell / n;
        const int c = cell % n;
        auto& idx = spec.constraint_index[cell];
        idx.push_back(r);
        idx.push_back(n + c);
        if (r == c) idx.push_back(2 * n);
        if (r + c == n - 1) idx.push_back(2 * n + 1);
      }
      break;
    }
    case ProblemKind::CostasArray: {
      // Difference-triangle rows d = 1..n-2 (row n-1 has a single entry and
      // can never collide). Constraint id d-1 covers positions appearing in
      // some difference of row d.
      spec.num_vars = n;
      spec.num_constraints = std::max(0, n - 2);
      spec.base_domain.resize(n);
      for (int v = 0; v < n; ++v) spec.base_domain[v] = v + 1;
      spec.constraint_index.resize(n);
      for (int d = 1; d <= n - 2; ++d)
        for (int pos = 0; pos < n; ++pos)
          if (pos >= d || pos <= n - 1 - d) spec.constraint_index[pos].push_back(d - 1);
      break;
    }
    case ProblemKind::AllInterval: {
      // One global constraint: all adjacent absolute differences distinct.
      spec.num_vars = n;
      spec.num_constraints = 1;
      spec.base_domain.resize(n);
      for (int v = 0; v < n; ++v) spec.base_domain[v] = v;
      spec.constraint_index.assign(n, {0});
      break;
    }
  }
  return spec;
}

inline bool is_permutation_of_domain(const ProblemSpec& spec, std::span<const int> values) {
  if (values.size() != spec.base_domain.size()) return false;
  std::vector<int> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return std::equal(sorted.begin(), sorted.end(), spec.base_domain.begin());
}

namespace detail {

inline void require_permutation(const ProblemSpec& spec, std::span<const int> values) {
  if (!is_permutation_of_domain(spec, values))
    throw std::invalid_argument(std::string("values are not a permutation of the ") +
                                to_string(spec.kind) + " base domain");
}

inline std::int64_t ms_cost(const ProblemSpec& spec, std::span<const int> values) {
  std::int64_t total = 0;
  for (int line = 0; line < spec.num_constraints; ++line)
    total += std::abs(ms_line_sum(spec.n, line, values) - spec.magic_constant);
  return total;
}

// Row error = (row length) - (distinct values in the row); zero iff the row
// is an all-different set.
inline std::int64_t costas_cost(int n, std::span<const int> values) {
  std::int64_t total = 0;
  std::vector<int> row;
  for (int d = 1; d <= n - 2; ++d) {
    row.clear();
    for (int i = 0; i + d < n; ++i) row.push_back(values[i + d] - values[i]);
    total += static_cast<std::int64_t>(row.size()) - count_distinct_sorted(row);
  }
  return total;
}

inline std::int64_t all_interval_cost(int n, std::span<const int> values) {
  std::vector<int> diffs;
  diffs.reserve(n - 1);
  for (int i = 0; i + 1 < n; ++i) diffs.push_back(std::abs(values[i + 1] - values[i]));
  return static_cast<std::int64_t>(diffs.size()) - count_distinct_sorted(diffs);
}

}  // namespace detail

/** Total cost of a configuration, recomputed from scratch. Zero iff the
 *  configuration is a solution. Rejects non-permutations. */
inline std::int64_t full_cost(const ProblemSpec& spec, std::span<const int> values) {
  detail::require_permutation(spec, values);
  switch (spec.kind) {
    case ProblemKind::MagicSquare: return detail::ms_cost(spec, values);
    case ProblemKind::CostasArray: return detail::costas_cost(spec.n, values);
    case ProblemKind::AllInterval: return detail::all_interval_cost(spec.n, values);
  }
  return 0;
}

/** Constraint errors projected onto positions.
 *
 *  Magic square: a cell's error is the sum of the errors of its lines.
 *  Costas / all-interval: a position's error is the number of colliding
 *  difference pairs it participates in. All entries are zero iff the total
 *  cost is zero. */
inline std::vector<std::int64_t> variable_errors(const ProblemSpec& spec,
                                                 const Configuration& config) {
  detail::require_permutation(spec, config.values);
  std::span<const int> values(config.values);
  std::vector<std::int64_t> errors(spec.num_vars, 0);
  switch (spec.kind) {
    case ProblemKind::MagicSquare: {
      std::vector<std::int64_t> line_err(spec.num_constraints);
      for (int line = 0; line < spec.num_constraints; ++line)
        line_err[line] =
            std::abs(detail::ms_line_sum(spec.n, line, values) - spec.magic_constant);
      for (int cell = 0; cell < spec.num_vars; ++cell)
        for (int line : spec.constraint_index[cell]) errors[cell] += line_err[line];
      break;
    }
    case ProblemKind::CostasArray: {
      const int n = spec.n;
      std::vector<std::pair<int, int>> row;  // (difference value, left index)
      for (int d = 1; d <= n - 2; ++d) {
        row.clear();
        for (int i = 0; i + d < n; ++i) row.emplace_back(values[i + d] - values[i], i);
        std::sort(row.begin(), row.end());
        std::size_t g = 0;
        while (g < row.size()) {
          std::size_t h = g;
          while (h < row.size() && row[h].first == row[g].first) ++h;
          const std::int64_t extra = static_cast<std::int64_t>(h - g) - 1;
          if (extra > 0)
            for (std::size_t t = g; t < h; ++t) {
              errors[row[t].second] += extra;
              errors[row[t].second + d] += extra;
            }
          g = h;
        }
      }
      break;
    }
    case ProblemKind::AllInterval: {
      const int n = spec.n;
      std::vector<std::pair<int, int>> diffs;
      for (int i = 0; i + 1 < n; ++i) diffs.emplace_back(std::abs(values[i + 1] - values[i]), i);
      std::sort(diffs.begin(), diffs.end());
      std::size_t g = 0;
      while (g < diffs.size()) {
        std::size_t h = g;
        while (h < diffs.size() && diffs[h].first == diffs[g].first) ++h;
        const std::int64_t extra = static_cast<std::int64_t>(h - g) - 1;
        if (extra > 0)
          for (std::size_t t = g; t < h; ++t) {
            errors[diffs[t].second] += extra;
            errors[diffs[t].second + 1] += extra;
          }
        g = h;
      }
      break;
    }
  }
  return errors;
}

/** Cost change of swapping positions i and j, touching only the constraints
 *  that contain i or j. Exact: equals full_cost(after) - full_cost(before). */
inline std::int64_t delta_cost_swap(const ProblemSpec& spec, const Configuration& config, int i,
                                    int j) {
  if (i < 0 || j < 0 || i >= spec.num_vars || j >= spec.num_vars)
    throw std::out_of_range("swap index out of range");
  if (i == j) throw std::invalid_argument("swap positions must differ");
  std::span<const int> values(config.values);
  switch (spec.kind) {
    case ProblemKind::MagicSquare: {
      const std::int64_t a = values[i];
      const std::int64_t b = values[j];
      std::int64_t delta = 0;
      auto line_delta = [&](int line, std::int64_t gain) {
        const std::int64_t sum = detail::ms_line_sum(spec.n, line, values);
        delta += std::abs(sum + gain - spec.magic_constant) -
                 std::abs(sum - spec.magic_constant);
      };
      for (int line : spec.constraint_index[i])
        if (!detail::ms_line_contains(spec.n, line, j)) line_delta(line, b - a);
      for (int line : spec.constraint_index[j])
        if (!detail::ms_line_contains(spec.n, line, i)) line_delta(line, a - b);
      return delta;
    }
    case ProblemKind::CostasArray: {
      const int n = spec.n;
      std::vector<int> swapped(values.begin(), values.end());
      std::swap(swapped[i], swapped[j]);
      std::int64_t delta = 0;
      std::vector<int> row;
      for (int d = 1; d <= n - 2; ++d) {
        const bool touched = (i >= d || i + d < n) || (j >= d || j + d < n);
        if (!touched) continue;
        row.clear();
        for (int t = 0; t + d < n; ++t) row.push_back(values[t + d] - values[t]);
        const std::int64_t before =
            static_cast<std::int64_t>(row.size()) - detail::count_distinct_sorted(row);
        row.clear();
        for (int t = 0; t + d < n; ++t) row.push_back(swapped[t + d] - swapped[t]);
        const std::int64_t after =
            static_cast<std::int64_t>(row.size()) - detail::count_distinct_sorted(row);
        delta += after - before;
      }
      return delta;
    }
    case ProblemKind::AllInterval: {
      std::vector<int> swapped(values.begin(), values.end());
      std::swap(swapped[i], swapped[j]);
      return detail::all_interval_cost(spec.n, swapped) -
             detail::all_interval_cost(spec.n, values);
    }
  }
  return 0;
}

inline bool is_solution(const ProblemSpec& spec, const Configuration& config) {
  return full_cost(spec, config.values) == 0;
}

}  // namespace als
