#include <doctest.h>

#include "spectral_circle/distances.hpp"
#include "spectral_circle/oracle.hpp"
#include "test_util.hpp"

using namespace sc;

namespace {

bool finite_relation(RelationTag t) {
    return t == RelationTag::Accessible || t == RelationTag::ConnectedNotAccessible;
}

Ray rephased(Ray v, double a) {
    for (auto& x : v) x *= std::polar(1.0, a);
    return v;
}

// connection with a prescribed far pattern: directions sharing a label are far
ConnectionSpec patterned(const std::vector<int>& label, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::uniform_int_distribution<int> shift(-1, 1);
    std::vector<double> base(8);
    for (auto& b : base) b = u(rng);
    std::vector<PeriodicFunction> th;
    for (int l : label) {
        const auto h = sct::random_periodic(rng, 2, 0.3);
        th.emplace_back(base[l] + shift(rng), h.harmonics());
    }
    return ConnectionSpec(th);
}

}  // namespace

TEST_CASE("distances are gauge invariant") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    for (int rep = 0; rep < 30; ++rep) {
        const auto spec = sct::random_spec(2, rng);
        const Ray v = sct::random_ray(2, rng);
        const PureState xi(u(rng), v);
        const auto z = state_from_coords(spec, xi, {1, u(rng), {0.0, u(rng)}});
        const double d = spectral_distance(spec, xi, z).value;
        const double dg = spectral_distance(spec, PureState(xi.base(), rephased(v, u(rng))),
                                            PureState(z.base(), rephased(z.ray(), u(rng))))
                              .value;
        CHECK(std::abs(d - dg) <= 1e-12 * std::max(1.0, d));
    }
}

TEST_CASE("classification, finiteness and divergence witness agree") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    std::uniform_int_distribution<int> coin(0, 3);
    int seen[4] = {0, 0, 0, 0};
    const std::vector<std::vector<int>> patterns = {{0, 1}, {0, 0}, {0, 1, 2}, {0, 1, 1}, {0, 1, 2, 2}};
    for (int rep = 0; rep < 100; ++rep) {
        const auto& pat = patterns[rep % patterns.size()];
        const std::size_t n = pat.size();
        const auto spec = patterned(pat, rng);
        const PureState xi(u(rng), sct::random_ray(n, rng));
        PureState z = xi;
        switch (coin(rng)) {
            case 0: z = horizontal_lift(spec, xi, 30 * (u(rng) - kPi) / kPi); break;
            case 1: z = PureState(u(rng), sct::random_ray(n, rng)); break;
            default: {
                TorusCoords c{0, u(rng), std::vector<double>(n, 0.0)};
                for (std::size_t j = 1; j < n; ++j) c.phi[j] = u(rng);
                // half of these share the phase inside each class
                if (coin(rng) < 2)
                    for (std::size_t j = 1; j < n; ++j)
                        for (std::size_t i = 0; i < j; ++i)
                            if (pat[i] == pat[j]) c.phi[j] = c.phi[i];
                z = state_from_coords(spec, xi, c);
            }
        }
        const auto rel = classify(spec, xi, z);
        ++seen[static_cast<int>(rel.tag)];
        const bool fin = finite_relation(rel.tag);
        CHECK(divergence_check(spec, xi, z) == !fin);
        if (n == 2 || wrap_2pi(z.base() - xi.base()) == 0.0 || !fin)
            CHECK(std::isfinite(spectral_distance(spec, xi, z).value) == fin);
    }
    for (int t = 0; t < 4; ++t) CHECK(seen[t] > 0);
}

TEST_CASE("d <= d_H on accessible pairs") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-25.0, 25.0);
    for (int rep = 0; rep < 100; ++rep) {
        const auto spec = sct::random_spec(2, rng);
        const PureState xi(0.0, sct::random_ray(2, rng));
        const auto z = horizontal_lift(spec, xi, u(rng));
        const double dh = horizontal_distance(spec, xi, z).value;
        REQUIRE(std::isfinite(dh));
        CHECK(spectral_distance(spec, xi, z).value <= dh + 1e-10);
    }
}

TEST_CASE("symmetry, n = 2 anywhere and n <= 4 on the fiber") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = 2 + rep % 3;
        const auto spec = sct::random_spec(n, rng);
        const PureState xi(u(rng), sct::random_ray(n, rng));
        TorusCoords c{rep % 5 - 2, n == 2 ? u(rng) : 0.0, std::vector<double>(n, 0.0)};
        for (std::size_t j = 1; j < n; ++j) c.phi[j] = u(rng);
        const auto z = state_from_coords(spec, xi, c);
        const double a = spectral_distance(spec, xi, z).value, b = spectral_distance(spec, z, xi).value;
        CHECK(std::abs(a - b) <= 1e-8 * std::max(1.0, a));
    }
}

TEST_CASE("triangle inequality on a common fiber, n <= 4") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    for (int rep = 0; rep < 150; ++rep) {
        const std::size_t n = 2 + rep % 3;
        const auto spec = sct::random_spec(n, rng);
        const PureState p(u(rng), sct::random_ray(n, rng));
        const auto on_fiber = [&] {
            TorusCoords c{rep % 5 - 2, 0.0, std::vector<double>(n, 0.0)};
            for (std::size_t j = 1; j < n; ++j) c.phi[j] = u(rng);
            return state_from_coords(spec, p, c);
        };
        const auto q = on_fiber(), r = on_fiber();
        const double pr = spectral_distance(spec, p, r).value;
        const double pq = spectral_distance(spec, p, q).value, qr = spectral_distance(spec, q, r).value;
        CHECK(pr <= pq + qr + 1e-8);
    }
}

TEST_CASE("oracle lower bound never exceeds the closed form") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    OracleOptions o;
    o.N = 128;
    o.restarts = 2;
    o.iters = 400;
    for (int rep = 0; rep < 4; ++rep) {
        const auto spec = sct::const_spec({0.0, -(0.1 + 0.8 * u(rng))});
        const PureState xi(0.0, sct::random_ray(2, rng));
        const auto z = state_from_coords(spec, xi, {rep - 1, kTwoPi * u(rng), {0.0, kTwoPi * u(rng)}});
        const double closed = spectral_distance(spec, xi, z).value;
        const auto r = oracle_distance(spec, xi, z, o);
        CHECK(r.best_value <= closed + 5e-2);
        CHECK(r.best_value >= 0.0);
    }
}
