#pragma once

#include <algorithm>

namespace als {

/** Rank-arithmetic tree over workers 0..num_workers-1; rank 0 is the root.
 *  parent(r) = (r-1)/arity, children(r) = arity*r+1 .. arity*r+arity. */
struct TreeTopology {
  int num_workers = 1;
  int arity = 2;

  int parent(int rank) const { return rank <= 0 ? -1 : (rank - 1) / arity; }
  int first_child(int rank) const { return arity * rank + 1; }

  int child_count(int rank) const {
    const int first = first_child(rank);
    if (first >= num_workers) return 0;
    return std::min(arity, num_workers - first);
  }

  int depth(int rank) const {
    int d = 0;
    while (rank > 0) {
      rank = parent(rank);
      ++d;
    }
    return d;
  }

  int max_depth() const { return depth(num_workers - 1); }
};

}  // namespace als
