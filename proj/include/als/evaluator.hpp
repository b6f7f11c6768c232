#pragma once

#include <cstdint>
#include <cstdlib>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "als/problem.hpp"

namespace als {

/** Incremental cost oracle bound to one configuration.
 *
 *  Keeps per-kind caches (line sums, difference-value counts) so that
 *  apply_swap and delta_swap touch only the constraints containing the two
 *  swapped positions. The cached cost always equals full_cost(values()). */
class Evaluator {
 public:
  virtual ~Evaluator() = default;

  const ProblemSpec& spec() const { return *spec_; }
  const std::vector<int>& values() const { return values_; }
  std::int64_t cost() const { return cost_; }
  int num_vars() const { return spec_->num_vars; }

  void reset(std::span<const int> values) {
    detail::require_permutation(*spec_, values);
    values_.assign(values.begin(), values.end());
    rebuild();
  }

  virtual void apply_swap(int i, int j) = 0;

  // Exact trial: apply, read, revert.
  virtual std::int64_t delta_swap(int i, int j) {
    const std::int64_t before = cost_;
    apply_swap(i, j);
    const std::int64_t after = cost_;
    apply_swap(i, j);
    return after - before;
  }

  virtual void variable_errors(std::vector<std::int64_t>& out) const = 0;

 protected:
  explicit Evaluator(const ProblemSpec& spec) : spec_(&spec) {}
  virtual void rebuild() = 0;

  const ProblemSpec* spec_;
  std::vector<int> values_;
  std::int64_t cost_ = 0;
};

namespace detail {

class MagicSquareEvaluator final : public Evaluator {
 public:
  explicit MagicSquareEvaluator(const ProblemSpec& spec)
      : Evaluator(spec), line_sums_(spec.num_constraints, 0) {}

  void apply_swap(int i, int j) override {
    const std::int64_t a = values_[i];
    const std::int64_t b = values_[j];
    shift_lines(i, j, b - a);
    shift_lines(j, i, a - b);
    std::swap(values_[i], values_[j]);
  }

  std::int64_t delta_swap(int i, int j) override {
    const std::int64_t a = values_[i];
    const std::int64_t b = values_[j];
    std::int64_t delta = 0;
    for (int line : spec_->constraint_index[i])
      if (!ms_line_contains(spec_->n, line, j)) delta += line_delta(line, b - a);
    for (int line : spec_->constraint_index[j])
      if (!ms_line_contains(spec_->n, line, i)) delta += line_delta(line, a - b);
    return delta;
  }

  void variable_errors(std::vector<std::int64_t>& out) const override {
    out.assign(spec_->num_vars, 0);
    std::vector<std::int64_t> line_err(spec_->num_constraints);
    for (int line = 0; line < spec_->num_constraints; ++line)
      line_err[line] = std::abs(line_sums_[line] - spec_->magic_constant);
    for (int cell = 0; cell < spec_->num_vars; ++cell)
      for (int line : spec_->constraint_index[cell]) out[cell] += line_err[line];
  }

 private:
  std::int64_t line_delta(int line, std::int64_t gain) const {
    const std::int64_t sum = line_sums_[line];
    return std::abs(sum + gain - spec_->magic_constant) -
           std::abs(sum - spec_->magic_constant);
  }

  // Lines that contain `pos` but not `other` gain `gain`.
  void shift_lines(int pos, int other, std::int64_t gain) {
    for (int line : spec_->constraint_index[pos]) {
      if (ms_line_contains(spec_->n, line, other)) continue;
      cost_ -= std::abs(line_sums_[line] - spec_->magic_constant);
      line_sums_[line] += gain;
      cost_ += std::abs(line_sums_[line] - spec_->magic_constant);
    }
  }

  void rebuild() override {
    cost_ = 0;
    for (int line = 0; line < spec_->num_constraints; ++line) {
      line_sums_[line] = ms_line_sum(spec_->n, line, values_);
      cost_ += std::abs(line_sums_[line] - spec_->magic_constant);
    }
  }

  std::vector<std::int64_t> line_sums_;
};

// Shared machinery for the two difference-based problems: per-row counts of
// difference values, cost = sum over rows of (occurrences - distinct).
class CostasEvaluator final : public Evaluator {
 public:
  explicit CostasEvaluator(const ProblemSpec& spec)
      : Evaluator(spec),
        rows_(std::max(0, spec.n - 2)),
        width_(2 * spec.n - 1),
        counts_(static_cast<std::size_t>(rows_) * width_, 0) {}

  void apply_swap(int i, int j) override {
    const int n = spec_->n;
    for (int d = 1; d <= rows_; ++d)
      for_affected(d, i, j, [&](int t) { remove_diff(d, values_[t + d] - values_[t]); });
    std::swap(values_[i], values_[j]);
    for (int d = 1; d <= rows_; ++d)
      for_affected(d, i, j, [&](int t) { add_diff(d, values_[t + d] - values_[t]); });
  }

  void variable_errors(std::vector<std::int64_t>& out) const override {
    const int n = spec_->n;
    out.assign(n, 0);
    for (int d = 1; d <= rows_; ++d)
      for (int t = 0; t + d < n; ++t) {
        const int m = count_at(d, values_[t + d] - values_[t]);
        if (m >= 2) {
          out[t] += m - 1;
          out[t + d] += m - 1;
        }
      }
  }

 private:
  // Difference indices of row d whose value changes when i and j swap.
  template <typename Fn>
  void for_affected(int d, int i, int j, Fn&& fn) const {
    const int n = spec_->n;
    int ts[4];
    int cnt = 0;
    auto push = [&](int t) {
      if (t < 0 || t + d >= n) return;
      for (int k = 0; k < cnt; ++k)
        if (ts[k] == t) return;
      ts[cnt++] = t;
    };
    push(i - d);
    push(i);
    push(j - d);
    push(j);
    for (int k = 0; k < cnt; ++k) fn(ts[k]);
  }

  int count_at(int d, int value) const {
    return counts_[static_cast<std::size_t>(d - 1) * width_ + (value + spec_->n - 1)];
  }

  void remove_diff(int d, int value) {
    int& c = counts_[static_cast<std::size_t>(d - 1) * width_ + (value + spec_->n - 1)];
    if (c >= 2) --cost_;
    --c;
  }

  void add_diff(int d, int value) {
    int& c = counts_[static_cast<std::size_t>(d - 1) * width_ + (value + spec_->n - 1)];
    if (c >= 1) ++cost_;
    ++c;
  }

  void rebuild() override {
    std::fill(counts_.begin(), counts_.end(), 0);
    cost_ = 0;
    const int n = spec_->n;
    for (int d = 1; d <= rows_; ++d)
      for (int t = 0; t + d < n; ++t) add_diff(d, values_[t + d] - values_[t]);
  }

  int rows_;
  int width_;
  std::vector<int> counts_;
};

class AllIntervalEvaluator final : public Evaluator {
 public:
  explicit AllIntervalEvaluator(const ProblemSpec& spec)
      : Evaluator(spec), counts_(spec.n, 0) {}

  void apply_swap(int i, int j) override {
    const int n = spec_->n;
    int ts[4];
    int cnt = 0;
    auto push = [&](int t) {
      if (t < 0 || t + 1 >= n) return;
      for (int k = 0; k < cnt; ++k)
        if (ts[k] == t) return;
      ts[cnt++] = t;
    };
    push(i - 1);
    push(i);
    push(j - 1);
    push(j);
    for (int k = 0; k < cnt; ++k) remove_diff(diff_at(ts[k]));
    std::swap(values_[i], values_[j]);
    for (int k = 0; k < cnt; ++k) add_diff(diff_at(ts[k]));
  }

  void variable_errors(std::vector<std::int64_t>& out) const override {
    const int n = spec_->n;
    out.assign(n, 0);
    for (int t = 0; t + 1 < n; ++t) {
      const int m = counts_[diff_at(t)];
      if (m >= 2) {
        out[t] += m - 1;
        out[t + 1] += m - 1;
      }
    }
  }

 private:
  int diff_at(int t) const { return std::abs(values_[t + 1] - values_[t]); }

  void remove_diff(int value) {
    int& c = counts_[value];
    if (c >= 2) --cost_;
    --c;
  }

  void add_diff(int value) {
    int& c = counts_[value];
    if (c >= 1) ++cost_;
    ++c;
  }

  void rebuild() override {
    std::fill(counts_.begin(), counts_.end(), 0);
    cost_ = 0;
    for (int t = 0; t + 1 < spec_->n; ++t) add_diff(diff_at(t));
  }

  std::vector<int> counts_;
};

}  // namespace detail

inline std::unique_ptr<Evaluator> make_evaluator(const ProblemSpec& spec) {
  switch (spec.kind) {
    case ProblemKind::MagicSquare: return std::make_unique<detail::MagicSquareEvaluator>(spec);
    case ProblemKind::CostasArray: return std::make_unique<detail::CostasEvaluator>(spec);
    case ProblemKind::AllInterval: return std::make_unique<detail::AllIntervalEvaluator>(spec);
  }
  return nullptr;
}

}  // namespace als
