#include "spectral_circle/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sc {

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

double CMatrix::frobenius() const {
    double s = 0.0;
    for (const auto& z : a_) s += std::norm(z);
    return std::sqrt(s);
}

double CMatrix::hermitian_defect() const {
    double d = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j)
            d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    if (o.n_ != n_) throw std::invalid_argument("CMatrix: size mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    if (o.n_ != n_) throw std::invalid_argument("CMatrix: size mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
    for (auto& z : a_) z *= s;
    return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw std::invalid_argument("CMatrix: size mismatch");
    CMatrix r(n);
    // plain real arithmetic: std::complex operator* carries inf/nan recovery we do not need
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double re = 0.0, im = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const cplx x = a(i, k), y = b(k, j);
                re += x.real() * y.real() - x.imag() * y.imag();
                im += x.real() * y.imag() + x.imag() * y.real();
            }
            r(i, j) = {re, im};
        }
    return r;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

namespace {

double off_norm(const CMatrix& a) {
    double s = 0.0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// A <- J^H A J for the unitary J that zeroes a(p,q).
void rotate(CMatrix& a, std::size_t p, std::size_t q) {
    const std::size_t n = a.size();
    const double r = std::abs(a(p, q));
    if (r == 0.0) return;

    // phase step: scale row/column q so that a(p,q) becomes real positive
    const cplx ph = a(p, q) / r;
    for (std::size_t k = 0; k < n; ++k) {
        a(k, q) *= std::conj(ph);
        a(q, k) *= ph;
    }
    a(q, q) = a(q, q).real();

    const double app = a(p, p).real(), aqq = a(q, q).real();
    const double theta = (aqq - app) / (2.0 * r);
    const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    for (std::size_t k = 0; k < n; ++k) {
        const cplx akp = a(k, p), akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const cplx apk = a(p, k), aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
    }
    a(p, q) = a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
}

}  // namespace

std::vector<double> sym_eigenvalues(const CMatrix& m, JacobiInfo* info, double tol, int max_sweeps) {
    const std::size_t n = m.size();
    const double scale = m.frobenius();
    if (m.hermitian_defect() > 1e-10 * std::max(scale, 1.0))
        throw std::invalid_argument("sym_eigenvalues: matrix is not Hermitian");

    CMatrix a = m;
    // symmetrize exactly so rounding in the input does not leak into the sweeps
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }

    JacobiInfo local;
    JacobiInfo& inf = info ? *info : local;
    inf = JacobiInfo{};
    const double target = tol * scale;

    if (off_norm(a) <= target) inf.converged = true;
    while (!inf.converged && inf.sweeps < max_sweeps) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) rotate(a, p, q);
        ++inf.sweeps;
        const double off = off_norm(a);
        inf.off_norms.push_back(off);
        if (off <= target) inf.converged = true;
    }

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

double trace_abs(const CMatrix& m) {
    double s = 0.0;
    for (double l : sym_eigenvalues(m)) s += std::abs(l);
    return s;
}

double spectral_norm(const CMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0) return 0.0;
    if (n == 1) return std::abs(m(0, 0));
    if (n == 2) {
        if (m(0, 0) == cplx{} && m(1, 1) == cplx{})
            return std::max(std::abs(m(0, 1)), std::abs(m(1, 0)));
        // largest eigenvalue of the 2x2 Gram matrix in closed form
        const double f2 = std::norm(m(0, 0)) + std::norm(m(0, 1)) + std::norm(m(1, 0)) + std::norm(m(1, 1));
        const double det = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
        const double disc = std::max(0.0, f2 * f2 - 4.0 * det * det);
        return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
    }
    const auto ev = sym_eigenvalues(m.adjoint() * m);
    return std::sqrt(std::max(0.0, ev.back()));
}

}  // namespace sc
