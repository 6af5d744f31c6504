// Serial reference vs OpenMP for the two data-parallel kernels.
#include <benchmark/benchmark.h>

#include <random>

#include "spectral_circle/distances.hpp"
#include "spectral_circle/kernels.hpp"

using namespace sc;

namespace {

HParams params() {
    HParams p;
    p.z = 0.6;
    p.R = 0.8;
    p.tau0 = 2.1;
    p.k = 2;
    p.omega = 0.31;
    p.phi = 1.3;
    return p;
}

void BM_TriangleGrid(benchmark::State& st, Exec exec) {
    const auto p = params();
    const Objective f = [&](const TrianglePoint& q) { return h_xi(q, p); };
    const int G = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(triangle_grid_max(f, p.tau0, 1.0, G, exec));
    st.SetItemsProcessed(st.iterations() * G * (G + 1) / 2);
}

void BM_CommutatorField(benchmark::State& st, Exec exec) {
    const std::size_t N = static_cast<std::size_t>(st.range(0)), n = static_cast<std::size_t>(st.range(1));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<CMatrix> a(N, CMatrix(n));
    std::vector<std::vector<double>> theta(N, std::vector<double>(n));
    for (std::size_t m = 0; m < N; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            theta[m][i] = g(rng);
            a[m](i, i) = g(rng);
            for (std::size_t j = i + 1; j < n; ++j) {
                a[m](i, j) = cplx(g(rng), g(rng));
                a[m](j, i) = std::conj(a[m](i, j));
            }
        }
    }
    const double h = kTwoPi / static_cast<double>(N);
    for (auto _ : st) {
        const auto field = commutator_field_kernel(a, theta, h, exec);
        benchmark::DoNotOptimize(sup_hermitian_norm(field, exec));
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(N));
}

}  // namespace

BENCHMARK_CAPTURE(BM_TriangleGrid, serial, Exec::Serial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TriangleGrid, parallel, Exec::Parallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CommutatorField, serial, Exec::Serial)
    ->Args({256, 2})->Args({4096, 3})->Args({4096, 8})->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_CommutatorField, parallel, Exec::Parallel)
    ->Args({256, 2})->Args({4096, 3})->Args({4096, 8})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
