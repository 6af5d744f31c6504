#include "spectral_circle/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sc {

bool better_point(double va, const TrianglePoint& a, double vb, const TrianglePoint& b) {
    if (va != vb) return va > vb;
    if (a.T != b.T) return a.T < b.T;
    return std::abs(a.Delta) < std::abs(b.Delta);
}

namespace {

GridMax scan_row(const Objective& f, double F, double sign, int G, int i, GridMax best) {
    const double step = F / (G - 1);
    const double T = i * step;
    for (int j = 0; i + j <= G - 1; ++j) {
        const TrianglePoint p{T, sign * j * step};
        const double v = f(p);
        if (better_point(v, p, best.value, best.at)) best = {v, p};
    }
    return best;
}

}  // namespace

GridMax triangle_grid_max(const Objective& f, double F, double sign, int G, Exec exec) {
    if (G < 2) throw std::invalid_argument("triangle_grid_max: need G >= 2");
    GridMax best{-std::numeric_limits<double>::infinity(), {}};
    if (exec == Exec::Serial) {
        for (int i = 0; i < G; ++i) best = scan_row(f, F, sign, G, i, best);
        return best;
    }
#pragma omp parallel
    {
        GridMax local{-std::numeric_limits<double>::infinity(), {}};
#pragma omp for schedule(dynamic, 8) nowait
        for (int i = 0; i < G; ++i) local = scan_row(f, F, sign, G, i, local);
#pragma omp critical
        if (better_point(local.value, local.at, best.value, best.at)) best = local;
    }
    return best;
}

std::vector<CMatrix> commutator_field_kernel(const std::vector<CMatrix>& a,
                                             const std::vector<std::vector<double>>& theta,
                                             double h, Exec exec) {
    const long N = static_cast<long>(a.size());
    if (N < 3 || theta.size() != a.size()) throw std::invalid_argument("commutator_field_kernel: bad sizes");
    const std::size_t n = a[0].size();
    std::vector<CMatrix> out(N, CMatrix(n));
    const double inv = 1.0 / (2.0 * h);
    auto point = [&](long m) {
        const CMatrix& ap = a[(m + 1) % N];
        const CMatrix& am = a[(m + N - 1) % N];
        const CMatrix& a0 = a[m];
        CMatrix& r = out[m];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                cplx v = (ap(i, j) - am(i, j)) * inv;
                if (i != j) v += cplx(0.0, theta[m][i] - theta[m][j]) * a0(i, j);
                r(i, j) = v;
            }
    };
    if (exec == Exec::Serial) {
        for (long m = 0; m < N; ++m) point(m);
    } else {
#pragma omp parallel for schedule(static)
        for (long m = 0; m < N; ++m) point(m);
    }
    return out;
}

double hermitian_op_norm(const CMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0) return 0.0;
    if (n == 1) return std::abs(m(0, 0).real());
    if (n == 2) {
        const double a = m(0, 0).real(), d = m(1, 1).real();
        const double c = 0.5 * (a + d);
        const double r = std::hypot(0.5 * (a - d), std::abs(0.5 * (m(0, 1) + std::conj(m(1, 0)))));
        return std::abs(c) + r;
    }
    const auto ev = sym_eigenvalues(m);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

double sup_hermitian_norm(const std::vector<CMatrix>& field, Exec exec) {
    const long N = static_cast<long>(field.size());
    double best = 0.0;
    if (exec == Exec::Serial) {
        for (long m = 0; m < N; ++m) best = std::max(best, hermitian_op_norm(field[m]));
        return best;
    }
#pragma omp parallel for reduction(max : best) schedule(static)
    for (long m = 0; m < N; ++m) best = std::max(best, hermitian_op_norm(field[m]));
    return best;
}

}  // namespace sc
