#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <set>
#include <span>
#include <vector>

#include "als/problem.hpp"

namespace als {

// Definition-level solution checkers, deliberately independent of the cost
// machinery: they restate each problem from its definition and are used to
// cross-check solver outputs.

inline bool is_permutation_of(std::span<const int> values, std::span<const int> base) {
  if (values.size() != base.size()) return false;
  std::vector<int> a(values.begin(), values.end());
  std::vector<int> b(base.begin(), base.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

/** True iff values lays out 1..n^2 in row-major order with every row,
 *  column and both diagonals summing to n(n^2+1)/2. */
inline bool validate_magic_square(std::span<const int> values, int n) {
  const int cells = n * n;
  if (static_cast<int>(values.size()) != cells) return false;
  std::vector<int> expected(cells);
  for (int v = 0; v < cells; ++v) expected[v] = v + 1;
  if (!is_permutation_of(values, expected)) return false;
  const std::int64_t magic = static_cast<std::int64_t>(n) * (static_cast<std::int64_t>(n) * n + 1) / 2;
  for (int r = 0; r < n; ++r) {
    std::int64_t sum = 0;
    for (int c = 0; c < n; ++c) sum += values[r * n + c];
    if (sum != magic) return false;
  }
  for (int c = 0; c < n; ++c) {
    std::int64_t sum = 0;
    for (int r = 0; r < n; ++r) sum += values[r * n + c];
    if (sum != magic) return false;
  }
  std::int64_t diag = 0, anti = 0;
  for (int r = 0; r < n; ++r) {
    diag += values[r * n + r];
    anti += values[r * n + (n - 1 - r)];
  }
  return diag == magic && anti == magic;
}

/** True iff values is a permutation of 1..n whose difference triangle has
 *  all-distinct entries in every row. */
inline bool validate_costas(std::span<const int> values, int n) {
  if (static_cast<int>(values.size()) != n) return false;
  std::vector<int> expected(n);
  for (int v = 0; v < n; ++v) expected[v] = v + 1;
  if (!is_permutation_of(values, expected)) return false;
  for (int d = 1; d < n; ++d) {
    std::set<int> seen;
    for (int i = 0; i + d < n; ++i)
      if (!seen.insert(values[i + d] - values[i]).second) return false;
  }
  return true;
}

/** True iff values is a permutation of 0..n-1 whose adjacent absolute
 *  differences are pairwise distinct. */
inline bool validate_all_interval(std::span<const int> values, int n) {
  if (static_cast<int>(values.size()) != n) return false;
  std::vector<int> expected(n);
  for (int v = 0; v < n; ++v) expected[v] = v;
  if (!is_permutation_of(values, expected)) return false;
  std::set<int> seen;
  for (int i = 0; i + 1 < n; ++i)
    if (!seen.insert(std::abs(values[i + 1] - values[i])).second) return false;
  return true;
}

inline bool validate_solution(const ProblemSpec& spec, std::span<const int> values) {
  switch (spec.kind) {
    case ProblemKind::MagicSquare: return validate_magic_square(values, spec.n);
    case ProblemKind::CostasArray: return validate_costas(values, spec.n);
    case ProblemKind::AllInterval: return validate_all_interval(values, spec.n);
  }
  return false;
}

}  // namespace als
