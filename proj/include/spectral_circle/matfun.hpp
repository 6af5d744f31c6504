#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace sc {

using cplx = std::complex<double>;

// Small dense square complex matrix, row-major. Used for both Hermitian
// matrices (the common case here) and general ones (commutators).
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(std::size_t n) : n_(n), a_(n * n) {}

    static CMatrix identity(std::size_t n);

    std::size_t size() const { return n_; }
    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

    CMatrix adjoint() const;
    double frobenius() const;
    // largest |a_ij - conj(a_ji)|
    double hermitian_defect() const;

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cplx s);

private:
    std::size_t n_ = 0;
    std::vector<cplx> a_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);

struct JacobiInfo {
    int sweeps = 0;
    bool converged = false;
    std::vector<double> off_norms;  // off-diagonal Frobenius norm after each sweep
};

// Cyclic Jacobi eigenvalues of a Hermitian (or real symmetric) matrix,
// sorted ascending. Stops when the off-diagonal norm is below
// tol * ||M||_F, or after max_sweeps. Throws std::invalid_argument if the
// input is not Hermitian to 1e-10 relative.
std::vector<double> sym_eigenvalues(const CMatrix& m, JacobiInfo* info = nullptr,
                                    double tol = 1e-12, int max_sweeps = 50);

// Nuclear norm of a Hermitian matrix: sum of |eigenvalues|.
double trace_abs(const CMatrix& m);

// Operator norm of any square matrix, sqrt(lambda_max(M* M)).
double spectral_norm(const CMatrix& m);

}  // namespace sc
