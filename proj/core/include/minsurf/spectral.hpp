#pragma once

#include <vector>

#include "minsurf/skeleton.hpp"

namespace minsurf {

/// Eigenvalues of a dense symmetric matrix (row-major, n x n), sorted
/// ascending. Cyclic Jacobi rotations; accurate to near machine precision for
/// the small matrices that arise from skeleton graphs.
std::vector<double> symmetric_eigenvalues(std::vector<double> matrix, int n);

/// Combinatorial Laplacian L = D - A of a simple graph, row-major.
std::vector<double> laplacian_matrix(const SimpleGraph& graph);

/// Sorted ascending Laplacian spectrum of a simple graph.
std::vector<double> laplacian_spectrum(const SimpleGraph& graph);

}  // namespace minsurf
