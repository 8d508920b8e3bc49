#pragma once

#include <vector>

namespace minsurf {

/// Minimum-cost one-to-one assignment of every row to a distinct column.
/// `cost` is row-major with n_rows <= n_cols. Returns the assigned column for
/// each row. Shortest-augmenting-path implementation with potentials, O(n^2 m);
/// deterministic for a fixed cost matrix.
std::vector<int> solve_assignment(const std::vector<double>& cost, int n_rows, int n_cols);

}  // namespace minsurf
