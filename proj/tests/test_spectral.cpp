#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "minsurf/spectral.hpp"
#include "test_helpers.hpp"

using namespace minsurf;

namespace {

// Independent dense symmetric eigensolver oracle.
std::vector<double> eigen_oracle(const std::vector<double>& matrix, int n) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = matrix[static_cast<size_t>(i) * n + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) values[i] = solver.eigenvalues()[i];
    return values;
}

SimpleGraph random_graph(std::mt19937_64& rng, int max_nodes) {
    SimpleGraph g;
    g.n = 1 + static_cast<int>(rng() % max_nodes);
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            if (rng() % 2) g.edges.push_back(EdgePair(i, j));
    return g;
}

}  // namespace

TEST_CASE("laplacian matrix of a path") {
    SimpleGraph p3{3, {EdgePair(0, 1), EdgePair(1, 2)}};
    CHECK_EQ(laplacian_matrix(p3), std::vector<double>{1, -1, 0, -1, 2, -1, 0, -1, 1});
}

TEST_CASE("known spectra: triangle {0,3,3} and path {0,1,3}") {
    SimpleGraph tri{3, {EdgePair(0, 1), EdgePair(1, 2), EdgePair(0, 2)}};
    const auto tri_spec = laplacian_spectrum(tri);
    CHECK_EQ(tri_spec[0], doctest::Approx(0.0).epsilon(1e-12));
    CHECK_EQ(tri_spec[1], doctest::Approx(3.0).epsilon(1e-12));
    CHECK_EQ(tri_spec[2], doctest::Approx(3.0).epsilon(1e-12));

    SimpleGraph p3{3, {EdgePair(0, 1), EdgePair(1, 2)}};
    const auto path_spec = laplacian_spectrum(p3);
    CHECK_EQ(path_spec[0], doctest::Approx(0.0).epsilon(1e-12));
    CHECK_EQ(path_spec[1], doctest::Approx(1.0).epsilon(1e-12));
    CHECK_EQ(path_spec[2], doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("jacobi agrees with the Eigen oracle on random graphs (n <= 8)") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 500; ++trial) {
        const SimpleGraph g = random_graph(rng, 8);
        const auto lap = laplacian_matrix(g);
        const auto ours = symmetric_eigenvalues(lap, g.n);
        const auto oracle = eigen_oracle(lap, g.n);
        REQUIRE_EQ(ours.size(), oracle.size());
        for (size_t i = 0; i < ours.size(); ++i)
            REQUIRE_MESSAGE(std::abs(ours[i] - oracle[i]) < 1e-8, "trial ", trial, " eig ", i);
    }
}

TEST_CASE("jacobi handles general symmetric matrices") {
    std::mt19937_64 rng(77);
    auto u = [&] { return (rng() >> 11) * 0x1.0p-53 * 4.0 - 2.0; };
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        std::vector<double> m(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double v = u();
                m[static_cast<size_t>(i) * n + j] = v;
                m[static_cast<size_t>(j) * n + i] = v;
            }
        const auto ours = symmetric_eigenvalues(m, n);
        const auto oracle = eigen_oracle(m, n);
        for (int i = 0; i < n; ++i) REQUIRE(std::abs(ours[i] - oracle[i]) < 1e-8);
    }
}
