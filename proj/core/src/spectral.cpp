#include "minsurf/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "minsurf/errors.hpp"

namespace minsurf {

std::vector<double> symmetric_eigenvalues(std::vector<double> m, int n) {
    if (n < 0 || m.size() != static_cast<size_t>(n) * n)
        throw Error("matrix size mismatch");
    if (n == 0) return {};

    auto at = [&m, n](int i, int j) -> double& { return m[static_cast<size_t>(i) * n + j]; };

    auto off_diagonal_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += at(i, j) * at(i, j);
        return std::sqrt(2.0 * s);
    };

    double scale = 0.0;
    for (double x : m) scale = std::fmax(scale, std::fabs(x));
    const double tol = (scale > 0.0 ? scale : 1.0) * 1e-14;

    for (int sweep = 0; sweep < 100 && off_diagonal_norm() > tol; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::fabs(apq) <= tol * 1e-2) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> eigenvalues(n);
    for (int i = 0; i < n; ++i) eigenvalues[i] = at(i, i);
    std::sort(eigenvalues.begin(), eigenvalues.end());
    return eigenvalues;
}

std::vector<double> laplacian_matrix(const SimpleGraph& graph) {
    const int n = graph.n;
    std::vector<double> lap(static_cast<size_t>(n) * n, 0.0);
    for (const EdgePair& e : graph.edges) {
        lap[static_cast<size_t>(e.a) * n + e.b] -= 1.0;
        lap[static_cast<size_t>(e.b) * n + e.a] -= 1.0;
        lap[static_cast<size_t>(e.a) * n + e.a] += 1.0;
        lap[static_cast<size_t>(e.b) * n + e.b] += 1.0;
    }
    return lap;
}

std::vector<double> laplacian_spectrum(const SimpleGraph& graph) {
    return symmetric_eigenvalues(laplacian_matrix(graph), graph.n);
}

}  // namespace minsurf
