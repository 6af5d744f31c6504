#include <doctest.h>

#include "spectral_circle/kernels.hpp"
#include "test_util.hpp"

using namespace sc;

TEST_CASE("tie-breaking order") {
    CHECK(better_point(2.0, {1.0, 0.0}, 1.0, {0.0, 0.0}));
    CHECK(better_point(1.0, {0.0, 0.5}, 1.0, {0.1, 0.0}));
    CHECK(better_point(1.0, {0.2, 0.1}, 1.0, {0.2, -0.3}));
    CHECK_FALSE(better_point(1.0, {0.2, 0.1}, 1.0, {0.2, 0.1}));
}

TEST_CASE("grid max: serial and parallel agree bit for bit") {
    // flat plateau plus ripples: many exact ties stress the tie-break merge
    const Objective f = [](const TrianglePoint& p) {
        return std::floor(8 * std::sin(3 * p.T) * std::cos(2 * p.Delta)) + 0.0 * p.T;
    };
    for (double sign : {1.0, -1.0})
        for (int G : {2, 17, 300}) {
            const auto a = triangle_grid_max(f, 2.3, sign, G, Exec::Serial);
            const auto b = triangle_grid_max(f, 2.3, sign, G, Exec::Parallel);
            CHECK(a.value == b.value);
            CHECK(a.at.T == b.at.T);
            CHECK(a.at.Delta == b.at.Delta);
            CHECK(sign * a.at.Delta >= 0.0);
            CHECK(a.at.T + std::abs(a.at.Delta) <= 2.3 * (1 + 1e-15));
        }
}

TEST_CASE("grid max against a plain loop") {
    const Objective f = [](const TrianglePoint& p) { return -(p.T - 0.4) * (p.T - 0.4) - (p.Delta - 0.9) * (p.Delta - 0.9); };
    const int G = 101;
    double best = -1e300;
    for (int i = 0; i < G; ++i)
        for (int j = 0; i + j < G; ++j) best = std::max(best, f({2.0 * i / (G - 1), 2.0 * j / (G - 1)}));
    CHECK(triangle_grid_max(f, 2.0, 1.0, G, Exec::Parallel).value == best);
}

TEST_CASE("commutator field: serial and parallel agree bit for bit") {
    std::mt19937_64 rng(2);
    const std::size_t N = 128, n = 3;
    std::vector<CMatrix> a;
    std::vector<std::vector<double>> th(N, std::vector<double>(n));
    std::normal_distribution<double> g;
    for (std::size_t m = 0; m < N; ++m) {
        a.push_back(sct::random_hermitian(n, rng));
        for (auto& x : th[m]) x = g(rng);
    }
    const double h = kTwoPi / N;
    const auto s = commutator_field_kernel(a, th, h, Exec::Serial);
    const auto p = commutator_field_kernel(a, th, h, Exec::Parallel);
    REQUIRE(s.size() == N);
    for (std::size_t m = 0; m < N; ++m) CHECK(s[m].data() == p[m].data());
    CHECK(sup_hermitian_norm(s, Exec::Serial) == sup_hermitian_norm(p, Exec::Parallel));
    // field is Hermitian
    for (const auto& c : s) CHECK(c.hermitian_defect() < 1e-12);
    // spot-check one entry against the defining formula
    const std::size_t m = 5;
    const cplx expect = (a[m + 1](0, 2) - a[m - 1](0, 2)) / (2 * h) + cplx(0, 1) * (th[m][0] - th[m][2]) * a[m](0, 2);
    CHECK(std::abs(s[m](0, 2) - expect) < 1e-12);
}

TEST_CASE("hermitian operator norm") {
    std::mt19937_64 rng(9);
    for (std::size_t n : {1u, 2u, 4u}) {
        const CMatrix m = sct::random_hermitian(n, rng);
        const auto e = sym_eigenvalues(m);
        CHECK(hermitian_op_norm(m) == doctest::Approx(std::max(std::abs(e.front()), std::abs(e.back()))).epsilon(1e-12));
    }
}
