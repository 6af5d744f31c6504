#include "spectral_circle/witness.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sc {

namespace {

struct GaussLegendre {
    std::array<double, 16> x{}, w{};
    GaussLegendre() {
        const int n = 16;
        for (int i = 0; i < n; ++i) {
            double z = std::cos(kPi * (i + 0.75) / (n + 0.5)), dp = 0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (z * p1 - p0) / (z * z - 1.0);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};

const GaussLegendre& gl() {
    static const GaussLegendre g;
    return g;
}

double wrap_pm_pi(double x) {
    double r = wrap_2pi(x + kPi) - kPi;
    return r;
}

}  // namespace

void WitnessElement::add_piece(double u0, double u1, const double* L, const double* R, bool ramp) {
    if (!(u1 > u0)) return;
    Piece p;
    p.u0 = u0;
    p.u1 = u1;
    p.sT0 = L[0]; p.sD0 = L[1]; p.r0 = L[2]; p.p0 = L[3];
    p.sT1 = R[0]; p.sD1 = R[1]; p.r1 = R[2]; p.p1 = R[3];
    p.ramp = ramp;
    if (!pieces_.empty()) {
        const Piece& q = pieces_.back();
        partial(q, q.u1, p.fp, p.fm, p.gi);
    }
    pieces_.push_back(p);
}

void WitnessElement::partial(const Piece& p, double t, double& fp, double& fm, cplx& gi) const {
    const double len = t - p.u0;
    const double lam = (p.u1 > p.u0) ? len / (p.u1 - p.u0) : 0.0;
    // slopes are linear in u: trapezoid is exact
    const double sT = p.sT0 + lam * (p.sT1 - p.sT0), sD = p.sD0 + lam * (p.sD1 - p.sD0);
    fp = p.fp + 0.5 * len * ((p.sT0 + p.sD0) + (sT + sD));
    fm = p.fm + 0.5 * len * ((p.sT0 - p.sD0) + (sT - sD));
    if (!p.ramp) {
        gi = p.gi + p.r0 * std::polar(1.0, p.p0) * len;
        return;
    }
    cplx acc = 0.0;
    const auto& q = gl();
    for (std::size_t i = 0; i < q.x.size(); ++i) {
        const double u = p.u0 + 0.5 * len * (q.x[i] + 1.0);
        const double l = (u - p.u0) / (p.u1 - p.u0);
        acc += q.w[i] * (p.r0 + l * (p.r1 - p.r0)) * std::polar(1.0, p.p0 + l * (p.p1 - p.p0));
    }
    gi = p.gi + 0.5 * len * acc;
}

WitnessElement::WitnessElement(const ConnectionSpec& spec, const PureState& xi, const TorusCoords& c,
                               const TrianglePoint& argmax, double epsilon, int branch) {
    if (spec.n() != 2 || xi.n() != 2) throw std::invalid_argument("WitnessElement: needs n = 2");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("WitnessElement: epsilon must lie in (0, 1)");
    frame_ = spec.shifted(xi.base());
    V_ = xi.ray();
    W_ = state_from_coords(spec, xi, c).ray();
    y_ = c.tau0;

    const double omega = spec.theta(0).mean() - spec.theta(1).mean();
    const double tau0 = c.tau0, T0 = argmax.T, D0 = argmax.Delta;
    const double F = std::min(tau0, kTwoPi - tau0);
    if (!(T0 >= -1e-12 && T0 + std::abs(D0) <= F + 1e-12))
        throw std::invalid_argument("WitnessElement: (T0, Delta0) outside the feasible triangle");
    // integer omega: the two directions are far, the off-diagonal part is dropped
    const bool trivial = near_integer(omega, 1e-9);
    const double theta0 = std::arg(2.0 * V_[0] * std::conj(V_[1]));
    const double k = static_cast<double>(c.k);
    const double phi = c.phi[1];
    const double phase_before = -k * omega * kPi - 0.5 * phi + theta0 + ((branch & 1) ? kPi : 0.0);
    const double phase_after = (1.0 - k) * omega * kPi - 0.5 * phi + theta0 + ((branch & 2) ? kPi : 0.0);
    const double twist = kTwoPi * omega;

    auto gamma = [](double len, double T, double D) {
        if (len <= 0.0) return 1.0;
        const double a = 1.0 - T / len, b = D / len;
        return std::sqrt(std::max(0.0, a * a - b * b));
    };
    const double len2 = kTwoPi - tau0;
    // state = {slope T, slope Delta, rho, phase}
    const double rho_scale = trivial ? 0.0 : 1.0;
    double s1[4] = {0, 0, rho_scale, phase_after};
    if (tau0 > 0.0)
        s1[0] = T0 / tau0, s1[1] = D0 / tau0, s1[2] = rho_scale * gamma(tau0, T0, D0), s1[3] = phase_before;
    const double s2[4] = {-T0 / len2, -D0 / len2, rho_scale * gamma(len2, T0, D0), phase_after};

    const double w = (tau0 > 0.0) ? std::min({0.5 * epsilon, 0.25 * tau0, 0.25 * len2}) : 0.5 * epsilon;
    // wrap ramp: from s2 (continued back past 0, phase untwisted) to s1, centred at 0
    const double wrapL[4] = {s2[0], s2[1], s2[2], s2[3] - twist};
    const double dphw = wrap_pm_pi(s1[3] - wrapL[3]);
    const double mid_w[4] = {0.5 * (wrapL[0] + s1[0]), 0.5 * (wrapL[1] + s1[1]), 0.5 * (wrapL[2] + s1[2]),
                             wrapL[3] + 0.5 * dphw};
    const double s1p[4] = {s1[0], s1[1], s1[2], wrapL[3] + dphw};
    add_piece(0.0, w, mid_w, s1p, true);
    if (tau0 > 0.0) {
        add_piece(w, tau0 - w, s1p, s1p, false);
        const double dph = wrap_pm_pi(s2[3] - s1p[3]);
        const double s2p[4] = {s2[0], s2[1], s2[2], s1p[3] + dph};
        add_piece(tau0 - w, tau0 + w, s1p, s2p, true);
        add_piece(tau0 + w, kTwoPi - w, s2p, s2p, false);
        const double endL[4] = {s2p[0], s2p[1], s2p[2], s2p[3]};
        const double endR[4] = {mid_w[0], mid_w[1], mid_w[2], mid_w[3] + twist + (s2p[3] - s2[3])};
        add_piece(kTwoPi - w, kTwoPi, endL, endR, true);
    } else {
        add_piece(w, kTwoPi - w, s1p, s1p, false);
        const double endR[4] = {mid_w[0], mid_w[1], mid_w[2], mid_w[3] + twist + (s1p[3] - s2[3])};
        add_piece(kTwoPi - w, kTwoPi, s1p, endR, true);
    }
    double fp, fm;
    cplx total;
    partial(pieces_.back(), kTwoPi, fp, fm, total);
    g0_ = trivial ? cplx{} : total / (std::polar(1.0, twist) - 1.0);
}

const WitnessElement::Piece& WitnessElement::piece_at(double t) const {
    for (const auto& p : pieces_)
        if (t <= p.u1) return p;
    return pieces_.back();
}

CMatrix WitnessElement::g(double t) const {
    double fp, fm;
    cplx gi;
    partial(piece_at(t), t, fp, fm, gi);
    CMatrix m(2);
    m(0, 0) = fp;
    m(1, 1) = fm;
    m(0, 1) = g0_ + gi;
    m(1, 0) = std::conj(m(0, 1));
    return m;
}

CMatrix WitnessElement::a(double t) const {
    CMatrix m = g(t);
    const double th = frame_.theta(0).integral(t) - frame_.theta(1).integral(t);
    m(0, 1) *= std::polar(1.0, -th);
    m(1, 0) = std::conj(m(0, 1));
    return m;
}

double WitnessElement::delta_value() const {
    auto q = [](const Ray& v, const CMatrix& a) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) s += std::conj(v[i]) * a(i, j) * v[j];
        return s.real();
    };
    return q(W_, a(y_)) - q(V_, a(0.0));
}

double WitnessElement::pointwise_norm_max() const {
    double best = 0.0;
    for (const auto& p : pieces_) {
        best = std::max(best, std::abs(p.sT0) + std::hypot(p.sD0, p.r0));
        best = std::max(best, std::abs(p.sT1) + std::hypot(p.sD1, p.r1));
    }
    return best;
}

DiscretizedElement WitnessElement::sample(std::size_t N) const {
    DiscretizedElement e;
    e.values.resize(N);
    for (std::size_t m = 0; m < N; ++m) e.values[m] = a(kTwoPi * static_cast<double>(m) / static_cast<double>(N));
    return e;
}

WitnessResult build_witness(const ConnectionSpec& spec, const PureState& xi, const TorusCoords& c,
                            const TrianglePoint& argmax, double epsilon, std::size_t comm_grid) {
    WitnessResult best;
    best.delta_value = -std::numeric_limits<double>::infinity();
    for (int b = 0; b < 4; ++b) {
        const WitnessElement w(spec, xi, c, argmax, epsilon, b);
        const double v = w.delta_value();
        if (v > best.delta_value) {
            best.delta_value = v;
            best.branch = b;
        }
    }
    const WitnessElement w(spec, xi, c, argmax, epsilon, best.branch);
    best.comm_norm_exact = w.pointwise_norm_max();
    best.comm_norm = commutator_sup_norm(w.frame(), w.sample(comm_grid));
    return best;
}

std::optional<CovariantElement> witness_seed(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                                             int N, const Tolerances& tol) {
    if (spec.n() != 2 || N < 2) return std::nullopt;
    const auto d = spectral_distance_n2(spec, xi, zeta, tol);
    if (!std::isfinite(d.value) || !d.argmax) return std::nullopt;
    const auto c = torus_coords(spec, xi, zeta, 0, tol.modulus);
    int branch = 0;
    double bestv = -std::numeric_limits<double>::infinity();
    for (int b = 0; b < 4; ++b) {
        const double v = WitnessElement(spec, xi, *c, *d.argmax, 1e-3, b).delta_value();
        if (v > bestv) bestv = v, branch = b;
    }
    const WitnessElement w(spec, xi, *c, *d.argmax, 1e-3, branch);
    const double h = kTwoPi / N;
    CovariantElement e;
    e.D.resize(N);
    CMatrix prev = w.g(0.0);
    for (int m = 0; m < N; ++m) {
        const CMatrix next = w.g(h * (m + 1));
        e.D[m] = (next - prev);
        e.D[m] *= cplx(1.0 / h);
        prev = next;
    }
    return e;
}

}  // namespace sc
