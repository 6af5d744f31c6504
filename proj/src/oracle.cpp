#include "spectral_circle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "spectral_circle/distances.hpp"
#include "spectral_circle/witness.hpp"

namespace sc {

void DiscretizedElement::validate() const {
    if (values.empty()) throw std::invalid_argument("DiscretizedElement: empty");
    const std::size_t n = values[0].size();
    for (const auto& v : values) {
        if (v.size() != n) throw std::invalid_argument("DiscretizedElement: inconsistent matrix size");
        if (v.hermitian_defect() > 1e-12 * std::max(1.0, v.frobenius()))
            throw std::invalid_argument("DiscretizedElement: value not Hermitian");
    }
}

std::vector<CMatrix> commutator_field(const ConnectionSpec& spec, const DiscretizedElement& a, Exec exec) {
    const std::size_t N = a.N();
    if (N < 64) throw std::invalid_argument("commutator_field: need N >= 64");
    if (a.values[0].size() != spec.n()) throw std::invalid_argument("commutator_field: dimension mismatch");
    const double h = kTwoPi / static_cast<double>(N);
    std::vector<std::vector<double>> theta(N, std::vector<double>(spec.n()));
    for (std::size_t m = 0; m < N; ++m)
        for (std::size_t j = 0; j < spec.n(); ++j) theta[m][j] = spec.theta(j).value(h * static_cast<double>(m));
    return commutator_field_kernel(a.values, theta, h, exec);
}

double commutator_sup_norm(const ConnectionSpec& spec, const DiscretizedElement& a, Exec exec) {
    return sup_hermitian_norm(commutator_field(spec, a, exec), exec);
}

namespace {

double quad_form(const Ray& v, const CMatrix& a) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) s += std::conj(v[i]) * a(i, j) * v[j];
    return s.real();
}

std::size_t snap(double base, std::size_t N, double* off) {
    const double h = kTwoPi / static_cast<double>(N);
    const long idx = std::lround(base / h);
    *off = std::abs(base - h * static_cast<double>(idx));
    return static_cast<std::size_t>(((idx % static_cast<long>(N)) + static_cast<long>(N)) % static_cast<long>(N));
}

}  // namespace

double evaluate_pair(const PureState& xi, const PureState& zeta, const DiscretizedElement& a, double* offset) {
    const std::size_t N = a.N();
    if (N == 0) throw std::invalid_argument("evaluate_pair: empty element");
    if (xi.n() != a.values[0].size() || zeta.n() != xi.n()) throw std::invalid_argument("evaluate_pair: dimension mismatch");
    double ox = 0, oy = 0;
    const std::size_t ix = snap(xi.base(), N, &ox), iy = snap(zeta.base(), N, &oy);
    if (offset) *offset = std::max(ox, oy);
    return quad_form(zeta.ray(), a.values[iy]) - quad_form(xi.ray(), a.values[ix]);
}

void OracleOptions::validate() const {
    if (N < 64) throw std::invalid_argument("oracle: N must be >= 64");
    if (restarts < 1) throw std::invalid_argument("oracle: restarts must be >= 1");
    if (iters < stages || stages < 1) throw std::invalid_argument("oracle: need iters >= stages >= 1");
    if (!(temp_start > 0 && temp_end > 0 && temp_end <= temp_start)) throw std::invalid_argument("oracle: bad temperatures");
    if (p_max < 2 || (p_max & (p_max - 1)) != 0) throw std::invalid_argument("oracle: p_max must be a power of two >= 2");
    tol.validate();
}

namespace {

// Everything about a (xi, zeta, N) problem that does not depend on the element.
struct Problem {
    ConnectionSpec frame;  // connection with xi at the origin
    std::size_t n = 0;
    std::size_t N = 0;
    double h = 0, y = 0;
    std::size_t my = 0;  // cell holding y
    double frac = 0;     // position of y inside its cell, in [0, 1)
    std::vector<std::vector<char>> zero_sum;  // diagonal and far entries
    CMatrix twist;       // 1/(exp(i Theta_ij(2pi)) - 1) on close pairs, 0 elsewhere
    CMatrix P, Q;        // conj(W_i) W_j exp(-i Theta_ij(y)),  conj(V_i) V_j
    CMatrix A, B;        // gradient of the objective: G_m = B + w_m A
    Ray V, W;
};

CMatrix herm_conj_part(const CMatrix& K) {
    // Hermitian part of conj(K): (conj(K) + K^T) / 2
    const std::size_t n = K.size();
    CMatrix G(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) G(i, j) = 0.5 * (std::conj(K(i, j)) + K(j, i));
    return G;
}

Problem make_problem(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta, std::size_t N,
                     const Tolerances& tol) {
    const std::size_t n = spec.n();
    if (xi.n() != n || zeta.n() != n) throw std::invalid_argument("oracle: dimension mismatch");
    Problem p;
    p.frame = spec.shifted(xi.base());
    p.n = n;
    p.N = N;
    p.h = kTwoPi / static_cast<double>(N);
    p.y = wrap_2pi(zeta.base() - xi.base());
    p.my = std::min<std::size_t>(static_cast<std::size_t>(p.y / p.h), N - 1);
    p.frac = (p.y - p.h * static_cast<double>(p.my)) / p.h;
    p.V = xi.ray();
    p.W = zeta.ray();

    const auto hol = holonomy_summary(spec, tol.holonomy);
    p.zero_sum.assign(n, std::vector<char>(n, 0));
    p.twist = CMatrix(n);
    p.P = CMatrix(n);
    p.Q = CMatrix(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double th_y = p.frame.theta(i).integral(p.y) - p.frame.theta(j).integral(p.y);
            p.P(i, j) = std::conj(p.W[i]) * p.W[j] * std::polar(1.0, -th_y);
            p.Q(i, j) = std::conj(p.V[i]) * p.V[j];
            if (i == j || hol.far_class[i] == hol.far_class[j]) {
                p.zero_sum[i][j] = 1;
            } else {
                const double th = kTwoPi * (spec.theta(i).mean() - spec.theta(j).mean());
                p.twist(i, j) = 1.0 / (std::polar(1.0, th) - 1.0);
            }
        }
    CMatrix KA(n), KB(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            KA(i, j) = p.h * p.P(i, j);
            KB(i, j) = p.h * (p.P(i, j) - p.Q(i, j)) * p.twist(i, j);
        }
    p.A = herm_conj_part(KA);
    p.B = herm_conj_part(KB);
    return p;
}

double weight(const Problem& p, std::size_t m) {
    if (m < p.my) return 1.0;
    if (m == p.my) return p.frac;
    return 0.0;
}

// N Hermitian n x n blocks stored contiguously (the increments D_m).
struct Field {
    std::size_t N = 0, n = 0;
    std::vector<cplx> v;
    Field() = default;
    Field(std::size_t N_, std::size_t n_) : N(N_), n(n_), v(N_ * n_ * n_) {}
    cplx* at(std::size_t m) { return v.data() + m * n * n; }
    const cplx* at(std::size_t m) const { return v.data() + m * n * n; }
};

Field to_field(const std::vector<CMatrix>& D, std::size_t n) {
    Field f(D.size(), n);
    for (std::size_t m = 0; m < D.size(); ++m) std::copy(D[m].data().begin(), D[m].data().end(), f.at(m));
    return f;
}

std::vector<CMatrix> from_field(const Field& f) {
    std::vector<CMatrix> D(f.N, CMatrix(f.n));
    for (std::size_t m = 0; m < f.N; ++m) std::copy(f.at(m), f.at(m) + f.n * f.n, D[m].data().begin());
    return D;
}

double frob_inner(const cplx* X, const cplx* Y, std::size_t nn) {
    double s = 0.0;
    for (std::size_t i = 0; i < nn; ++i) s += X[i].real() * Y[i].real() + X[i].imag() * Y[i].imag();
    return s;
}

CMatrix g_origin(const Problem& p, const Field& D) {
    CMatrix g0(p.n);
    for (std::size_t i = 0; i < p.n; ++i)
        for (std::size_t j = 0; j < p.n; ++j) {
            if (p.twist(i, j) == cplx{}) continue;
            cplx sum = 0.0;
            for (std::size_t m = 0; m < p.N; ++m) sum += D.at(m)[i * p.n + j];
            g0(i, j) = p.twist(i, j) * p.h * sum;
        }
    return g0;
}

// direct evaluation, independent of the A/B gradient form
double objective_direct(const Problem& p, const Field& D) {
    const CMatrix g0 = g_origin(p, D);
    CMatrix gy = g0;
    for (std::size_t m = 0; m < p.N; ++m) {
        const double w = weight(p, m);
        if (w == 0.0) break;
        for (std::size_t e = 0; e < p.n * p.n; ++e) gy.data()[e] += (w * p.h) * D.at(m)[e];
    }
    cplx zy = 0.0, x0 = 0.0;
    for (std::size_t i = 0; i < p.n; ++i)
        for (std::size_t j = 0; j < p.n; ++j) {
            zy += p.P(i, j) * gy(i, j);
            x0 += p.Q(i, j) * g0(i, j);
        }
    return zy.real() - x0.real();
}

double objective_linear(const Problem& p, const Field& D) {
    const std::size_t nn = p.n * p.n;
    double s = 0.0;
    for (std::size_t m = 0; m < p.N; ++m)
        s += frob_inner(p.B.data().data(), D.at(m), nn) + weight(p, m) * frob_inner(p.A.data().data(), D.at(m), nn);
    return s;
}

double block_op_norm(const cplx* d, std::size_t n) {
    if (n == 2) {
        const double a = d[0].real(), c = d[3].real();
        return std::abs(0.5 * (a + c)) + std::hypot(0.5 * (a - c), std::abs(d[1]));
    }
    CMatrix M(n);
    std::copy(d, d + n * n, M.data().begin());
    return hermitian_op_norm(M);
}

double exact_norm(const Field& D) {
    double s = 0.0;
    for (std::size_t m = 0; m < D.N; ++m) s = std::max(s, block_op_norm(D.at(m), D.n));
    return s;
}

void project(const Problem& p, Field& D) {
    const std::size_t n = p.n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!p.zero_sum[i][j]) continue;
            cplx mean = 0.0;
            for (std::size_t m = 0; m < p.N; ++m) mean += D.at(m)[i * n + j];
            mean /= static_cast<double>(p.N);
            for (std::size_t m = 0; m < p.N; ++m) D.at(m)[i * n + j] -= mean;
        }
    for (std::size_t m = 0; m < p.N; ++m) {  // keep exactly Hermitian
        cplx* d = D.at(m);
        for (std::size_t i = 0; i < n; ++i) {
            d[i * n + i] = d[i * n + i].real();
            for (std::size_t j = i + 1; j < n; ++j) d[j * n + i] = std::conj(d[i * n + j]);
        }
    }
}

// Hermitian product of two commuting Hermitian matrices (powers of the same
// matrix), row-major n x n, written into r.
void herm_mul(const cplx* x, const cplx* y, cplx* r, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double re = 0.0, im = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const cplx a = x[i * n + k], b = y[k * n + j];
                re += a.real() * b.real() - a.imag() * b.imag();
                im += a.real() * b.imag() + a.imag() * b.real();
            }
            r[i * n + j] = {re, i == j ? 0.0 : im};
            if (i != j) r[j * n + i] = {re, -im};
        }
}

constexpr std::size_t kMaxN = 8;

// Schatten-p value of a Hermitian block and, if grad is set, its gradient
// (p a power of two).
double schatten(const cplx* X, std::size_t n, int p, cplx* grad) {
    const std::size_t nn = n * n;
    double f = 0.0;
    for (std::size_t i = 0; i < nn; ++i) f += std::norm(X[i]);
    f = std::sqrt(f);
    if (f == 0.0) {
        if (grad) std::fill(grad, grad + nn, cplx{});
        return 0.0;
    }
    if (n == 2 && !grad) {  // closed form from the two eigenvalues
        const double c = 0.5 * (X[0].real() + X[3].real());
        const double r = std::hypot(0.5 * (X[0].real() - X[3].real()), std::abs(X[1]));
        const double l1 = std::abs(c + r), l2 = std::abs(c - r), big = std::max(l1, l2);
        if (big == 0.0) return 0.0;
        return big * std::pow(1.0 + std::pow(std::min(l1, l2) / big, p), 1.0 / p);
    }
    cplx Y[kMaxN * kMaxN], acc[kMaxN * kMaxN], pw[kMaxN * kMaxN], tmp[kMaxN * kMaxN];
    for (std::size_t i = 0; i < nn; ++i) Y[i] = acc[i] = pw[i] = X[i] / f;
    for (int q = 2; q < p; q *= 2) {
        herm_mul(pw, pw, tmp, n);
        std::copy(tmp, tmp + nn, pw);
        herm_mul(acc, pw, tmp, n);
        std::copy(tmp, tmp + nn, acc);
    }
    double tr = 0.0;  // tr(Y^p) = tr(acc Y)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) tr += (acc[i * n + j] * Y[j * n + i]).real();
    tr = std::max(tr, std::numeric_limits<double>::min());
    if (grad) {
        const double s = 1.0 / std::pow(tr, (p - 1.0) / p);
        for (std::size_t i = 0; i < nn; ++i) grad[i] = acc[i] * s;
    }
    return f * std::pow(tr, 1.0 / p);
}

struct Workspace {
    std::vector<double> s;
    Field gs;
};

// J = L / S with S the log-sum-exp over m of the Schatten norms;
// fills grad (projected) when non-null.
double smoothed(const Problem& p, const Field& D, int pexp, double temp, Field* grad, Workspace& ws) {
    const std::size_t N = p.N, nn = p.n * p.n;
    ws.s.resize(N);
    if (grad && ws.gs.N != N) ws.gs = Field(N, p.n);
    for (std::size_t m = 0; m < N; ++m) ws.s[m] = schatten(D.at(m), p.n, pexp, grad ? ws.gs.at(m) : nullptr);
    const double smax = *std::max_element(ws.s.begin(), ws.s.end());
    double Z = 0.0;
    for (double v : ws.s) Z += std::exp((v - smax) / temp);
    const double S = smax + temp * std::log(Z);
    const double J = objective_linear(p, D) / S;
    if (!grad) return J;
    if (grad->N != N) *grad = Field(N, p.n);
    const cplx* A = p.A.data().data();
    const cplx* B = p.B.data().data();
    for (std::size_t m = 0; m < N; ++m) {
        const double pi_m = std::exp((ws.s[m] - smax) / temp) / Z;
        const double w = weight(p, m);
        cplx* g = grad->at(m);
        const cplx* gs = ws.gs.at(m);
        for (std::size_t e = 0; e < nn; ++e) g[e] = (B[e] + w * A[e] - (J * pi_m) * gs[e]) / S;
    }
    project(p, *grad);
    return J;
}

double total_frob(const Field& D) {
    double s = 0.0;
    for (const auto& z : D.v) s += std::norm(z);
    return std::sqrt(s);
}

void normalize(Field& D, int pexp) {
    double smax = 0.0;
    for (std::size_t m = 0; m < D.N; ++m) smax = std::max(smax, schatten(D.at(m), D.n, pexp, nullptr));
    if (smax > 0.0)
        for (auto& z : D.v) z /= smax;
}

void random_hermitian(cplx* H, std::size_t n, std::mt19937_64& rng, double scale, bool add) {
    std::normal_distribution<double> nd(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx d = scale * nd(rng);
        H[i * n + i] = add ? H[i * n + i] + d : d;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double re = nd(rng), im = nd(rng);
            const cplx v = scale * cplx(re, im);
            H[i * n + j] = add ? H[i * n + j] + v : v;
            H[j * n + i] = std::conj(H[i * n + j]);
        }
    }
}

Field smooth_seed(const Problem& p, std::mt19937_64& rng) {
    Field D(p.N, p.n);
    const std::size_t nn = p.n * p.n;
    std::vector<cplx> C(nn), S(nn), K(nn);
    random_hermitian(K.data(), p.n, rng, 1.0, false);
    for (std::size_t m = 0; m < p.N; ++m) std::copy(K.begin(), K.end(), D.at(m));
    for (int q = 1; q <= 4; ++q) {
        random_hermitian(C.data(), p.n, rng, 1.0 / q, false);
        random_hermitian(S.data(), p.n, rng, 1.0 / q, false);
        for (std::size_t m = 0; m < p.N; ++m) {
            const double t = p.h * static_cast<double>(m);
            const double c = std::cos(q * t), s = std::sin(q * t);
            for (std::size_t e = 0; e < nn; ++e) D.at(m)[e] += c * C[e] + s * S[e];
        }
    }
    return D;
}

Field noise_seed(const Problem& p, std::mt19937_64& rng) {
    Field D(p.N, p.n);
    for (std::size_t m = 0; m < p.N; ++m) random_hermitian(D.at(m), p.n, rng, 1.0, false);
    return D;
}

struct AscentResult {
    Field best;
    double best_value = -std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

void track(const Problem& p, const Field& D, AscentResult& r) {
    const double nrm = exact_norm(D);
    if (!(nrm > 0.0)) return;
    const double v = objective_direct(p, D) / nrm;
    if (v > r.best_value) {
        r.best_value = v;
        r.best = D;
    }
}

AscentResult ascend(const Problem& p, Field D, const OracleOptions& opt) {
    AscentResult r;
    project(p, D);
    track(p, D, r);
    Workspace ws;
    Field grad(p.N, p.n), trial(p.N, p.n);
    const int per_stage = opt.iters / opt.stages;
    const int emax = static_cast<int>(std::lround(std::log2(static_cast<double>(opt.p_max))));
    for (int st = 0; st < opt.stages; ++st) {
        const double frac = opt.stages > 1 ? static_cast<double>(st) / (opt.stages - 1) : 1.0;
        const double temp = opt.temp_start * std::pow(opt.temp_end / opt.temp_start, frac);
        const int pexp = 1 << std::max(1, static_cast<int>(std::lround(1 + frac * (emax - 1))));
        normalize(D, pexp);
        double J = smoothed(p, D, pexp, temp, &grad, ws);
        double eta = 0.05;
        int stall = 0;
        bool stage_converged = false;
        for (int it = 0; it < per_stage; ++it) {
            ++r.iterations;
            const double gnorm = total_frob(grad);
            if (gnorm == 0.0) {
                stage_converged = true;
                break;
            }
            const double scale = eta * total_frob(D) / gnorm;
            for (std::size_t e = 0; e < D.v.size(); ++e) trial.v[e] = D.v[e] + scale * grad.v[e];
            project(p, trial);
            normalize(trial, pexp);
            const double Jt = smoothed(p, trial, pexp, temp, nullptr, ws);
            if (Jt > J) {
                const double gain = Jt - J;
                std::swap(D, trial);
                J = smoothed(p, D, pexp, temp, &grad, ws);
                eta = std::min(eta * 1.5, 1.0);
                stall = gain < 1e-13 * std::max(1.0, std::abs(J)) ? stall + 1 : 0;
                if (it % 4 == 0) track(p, D, r);
            } else {
                eta *= 0.5;
                ++stall;
            }
            if (eta < 1e-12 || stall > 40) {
                stage_converged = true;
                break;
            }
        }
        track(p, D, r);
        r.converged = stage_converged;
    }
    return r;
}

}  // namespace

CovariantEval evaluate_covariant(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                                 const CovariantElement& e, const Tolerances& tol) {
    const Problem p = make_problem(spec, xi, zeta, e.D.size(), tol);
    const Field f = to_field(e.D, p.n);
    return {objective_direct(p, f), exact_norm(f)};
}

DiscretizedElement sample_covariant(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                                    const CovariantElement& e, const Tolerances& tol) {
    const Problem p = make_problem(spec, xi, zeta, e.D.size(), tol);
    DiscretizedElement a;
    a.values.resize(p.N);
    CMatrix g = g_origin(p, to_field(e.D, p.n));
    for (std::size_t m = 0; m < p.N; ++m) {
        const double t = p.h * static_cast<double>(m);
        CMatrix am(p.n);
        for (std::size_t i = 0; i < p.n; ++i)
            for (std::size_t j = 0; j < p.n; ++j) {
                const double th = p.frame.theta(i).integral(t) - p.frame.theta(j).integral(t);
                am(i, j) = g(i, j) * std::polar(1.0, -th);
            }
        a.values[m] = std::move(am);
        g += cplx(p.h) * e.D[m];
    }
    return a;
}

OracleReport oracle_distance(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                             const OracleOptions& opt, const std::vector<CovariantElement>& seeds) {
    opt.validate();
    OracleReport rep;
    const Relation rel = classify(spec, xi, zeta, opt.tol);
    if (rel.tag == RelationTag::DifferentTorus || rel.tag == RelationTag::SameTorusDisconnected) {
        rep.diverges = divergence_check(spec, xi, zeta, 6, opt.tol);
        rep.best_value = std::numeric_limits<double>::infinity();
        rep.converged = rep.diverges;
        return rep;
    }
    if (spec.n() > kMaxN) throw std::invalid_argument("oracle_distance: supports n <= 8");
    const Problem p = make_problem(spec, xi, zeta, static_cast<std::size_t>(opt.N), opt.tol);

    std::vector<Field> starts;
    for (const auto& s : seeds)
        if (s.D.size() == p.N) starts.push_back(to_field(s.D, p.n));
    if (spec.n() == 2 && starts.empty()) {
        if (auto w = witness_seed(spec, xi, zeta, opt.N, opt.tol)) starts.push_back(to_field(w->D, p.n));
    }
    const int n_random = std::max(0, opt.restarts - static_cast<int>(starts.size()));
    for (int r = 0; r < n_random; ++r) {
        std::mt19937_64 rng(opt.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(r) + 1);
        starts.push_back(r == 0 ? noise_seed(p, rng) : smooth_seed(p, rng));
    }

    std::vector<AscentResult> results(starts.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long r = 0; r < static_cast<long>(starts.size()); ++r) results[r] = ascend(p, starts[r], opt);

    for (std::size_t r = 0; r < results.size(); ++r) {
        rep.iterations += results[r].iterations;
        if (results[r].best_value > rep.best_value || rep.best_restart < 0) {
            rep.best_value = results[r].best_value;
            rep.best_restart = static_cast<int>(r);
            rep.converged = results[r].converged;
        }
    }
    rep.restarts = static_cast<int>(results.size());

    Field best = results[rep.best_restart].best;
    const double nrm = exact_norm(best);
    for (auto& z : best.v) z /= nrm;
    const double obj = objective_direct(p, best);
    rep.best_value = std::max(obj, 0.0);
    rep.comm_norm = exact_norm(best);

    DiscretizedElement a;
    {
        CovariantElement e{from_field(best)};
        a = sample_covariant(spec, xi, zeta, e, opt.tol);
    }
    rep.cd_comm_norm = commutator_sup_norm(p.frame, a);
    rep.cd_value = rep.cd_comm_norm > 0 ? obj / rep.cd_comm_norm : 0.0;
    rep.slack = std::abs(rep.cd_value - rep.best_value);
    return rep;
}

namespace {

// a_ij(t) = C exp(-i Theta_ij(t) + i t delta / 2pi), periodic on a far pair
cplx flat_entry(const ConnectionSpec& frame, std::size_t i, std::size_t j, double t, double delta, cplx C) {
    const double th = frame.theta(i).integral(t) - frame.theta(j).integral(t);
    return C * std::polar(1.0, -th + t * delta / kTwoPi);
}

}  // namespace

bool divergence_check(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta, int scale_steps,
                      const Tolerances& tol) {
    const std::size_t n = spec.n();
    if (xi.n() != n || zeta.n() != n) throw std::invalid_argument("divergence_check: dimension mismatch");
    scale_steps = std::max(scale_steps, 1);
    const ConnectionSpec frame = spec.shifted(xi.base());
    const double y = wrap_2pi(zeta.base() - xi.base());

    const auto c = torus_coords(spec, xi, zeta, 0, tol.modulus);
    if (!c) {
        // constant diagonal projector on the most mismatched direction
        std::size_t i0 = 0;
        double worst = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = std::abs(std::abs(zeta.ray()[i]) - std::abs(xi.ray()[i]));
            if (d > worst) {
                worst = d;
                i0 = i;
            }
        }
        DiscretizedElement a;
        CMatrix e(n);
        e(i0, i0) = 1.0;
        a.values.assign(64, e);
        const double obj = std::norm(zeta.ray()[i0]) - std::norm(xi.ray()[i0]);
        const double comm = commutator_sup_norm(frame, a);
        return worst > tol.modulus && obj != 0.0 && comm == 0.0;
    }

    const auto hol = holonomy_summary(spec, tol.holonomy);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (hol.far_class[i] != hol.far_class[j]) continue;
            if (std::abs(xi.ray()[i]) <= tol.modulus || std::abs(xi.ray()[j]) <= tol.modulus) continue;
            if (circular_distance(c->phi[i], c->phi[j]) < tol.phase) continue;

            const double th2 = kTwoPi * (spec.theta(i).mean() - spec.theta(j).mean());
            const double delta = th2 - kTwoPi * std::round(th2 / kTwoPi);
            // objective of the Hermitian pair (C at (i,j), conj at (j,i)) is 2 Re(C X)
            const cplx X = std::conj(zeta.ray()[i]) * zeta.ray()[j] * flat_entry(frame, i, j, y, delta, 1.0) -
                           std::conj(xi.ray()[i]) * xi.ray()[j];
            if (std::abs(X) == 0.0) continue;
            const cplx C = std::conj(X) / std::abs(X);
            const double obj = 2.0 * (C * X).real();

            double first = 0.0, last = 0.0;
            for (int s = 0; s < scale_steps; ++s) {
                const std::size_t N = std::size_t{64} << s;
                const double h = kTwoPi / static_cast<double>(N);
                DiscretizedElement a;
                a.values.assign(N, CMatrix(n));
                for (std::size_t m = 0; m < N; ++m) {
                    const cplx v = flat_entry(frame, i, j, h * static_cast<double>(m), delta, C);
                    a.values[m](i, j) = v;
                    a.values[m](j, i) = std::conj(v);
                }
                const double comm = commutator_sup_norm(frame, a);
                if (s == 0) first = comm;
                last = comm;
            }
            if (obj >= 1e-9 && last <= first && last <= 1e-3 * obj) return true;
        }
    return false;
}

}  // namespace sc
