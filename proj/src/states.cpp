#include "spectral_circle/states.hpp"

#include <cmath>
#include <stdexcept>

namespace sc {

PureState::PureState(double base, Ray ray) : base_(0.0), ray_(std::move(ray)) {
    if (!std::isfinite(base)) throw std::invalid_argument("PureState: non-finite base point");
    if (ray_.empty()) throw std::invalid_argument("PureState: empty ray");
    double nrm = 0.0;
    for (const auto& c : ray_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw std::invalid_argument("PureState: non-finite component");
        nrm += std::norm(c);
    }
    if (!(nrm > 0.0)) throw std::invalid_argument("PureState: zero vector");
    nrm = std::sqrt(nrm);
    cplx gauge = 1.0;
    for (const auto& c : ray_)
        if (c != cplx{}) {
            gauge = std::conj(c) / std::abs(c);
            break;
        }
    for (auto& c : ray_) c *= gauge / nrm;
    for (auto& c : ray_)
        if (c != cplx{}) {
            c = std::abs(c);  // exact real, non-negative
            break;
        }
    base_ = wrap_2pi(base);
}

PureState PureState::from_bloch(double base, double z, double azimuth) {
    if (!(z >= -1.0 && z <= 1.0)) throw std::invalid_argument("from_bloch: z must be in [-1, 1]");
    const double a = std::sqrt(0.5 * (1.0 + z));
    const double b = std::sqrt(0.5 * (1.0 - z));
    return PureState(base, Ray{a, b * std::polar(1.0, -azimuth)});
}

BlochPoint to_bloch(const PureState& s) {
    if (s.n() != 2) throw std::invalid_argument("to_bloch: needs n = 2");
    const cplx v0 = s.ray()[0], v1 = s.ray()[1];
    const cplx w = 2.0 * v0 * std::conj(v1);
    BlochPoint b;
    b.x = w.real();
    b.y = w.imag();
    b.z = std::norm(v0) - std::norm(v1);
    b.R = 2.0 * std::abs(v0) * std::abs(v1);
    return b;
}

double lift_phase(const ConnectionSpec& spec, std::size_t j, double base, long k, double tau0) {
    const auto& f = spec.theta(j);
    return static_cast<double>(k) * kTwoPi * f.mean() + (f.integral(base + tau0) - f.integral(base));
}

PureState horizontal_lift(const ConnectionSpec& spec, const PureState& xi, double tau) {
    if (xi.n() != spec.n()) throw std::invalid_argument("horizontal_lift: dimension mismatch");
    if (!std::isfinite(tau)) throw std::invalid_argument("horizontal_lift: non-finite tau");
    const long k = static_cast<long>(std::floor(tau / kTwoPi));
    double tau0 = tau - kTwoPi * static_cast<double>(k);
    if (tau0 < 0) tau0 = 0;
    Ray r(xi.n());
    for (std::size_t j = 0; j < xi.n(); ++j)
        r[j] = xi.ray()[j] * std::polar(1.0, -lift_phase(spec, j, xi.base(), k, tau0));
    return PureState(xi.base() + tau0, std::move(r));
}

std::size_t reference_index(const Ray& v, double tol) {
    for (std::size_t j = 0; j < v.size(); ++j)
        if (std::abs(v[j]) > tol) return j;
    return 0;
}

std::optional<TorusCoords> torus_coords(const ConnectionSpec& spec, const PureState& xi,
                                        const PureState& zeta, long k, double tol) {
    const std::size_t n = spec.n();
    if (xi.n() != n || zeta.n() != n) throw std::invalid_argument("torus_coords: dimension mismatch");
    for (std::size_t j = 0; j < n; ++j)
        if (std::abs(std::abs(zeta.ray()[j]) - std::abs(xi.ray()[j])) > tol) return std::nullopt;

    TorusCoords c;
    c.k = k;
    c.tau0 = wrap_2pi(zeta.base() - xi.base());
    c.phi.assign(n, 0.0);

    std::vector<cplx> rel(n);  // W_j conj(V_j(tau))
    for (std::size_t j = 0; j < n; ++j) {
        const cplx vt = xi.ray()[j] * std::polar(1.0, -lift_phase(spec, j, xi.base(), k, c.tau0));
        rel[j] = zeta.ray()[j] * std::conj(vt);
    }
    const std::size_t r = reference_index(xi.ray(), tol);
    const cplx ref = rel[r] / std::abs(rel[r]);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == r || std::abs(xi.ray()[j]) <= tol) continue;
        c.phi[j] = wrap_2pi(std::arg(rel[j] * std::conj(ref)));
    }
    return c;
}

PureState state_from_coords(const ConnectionSpec& spec, const PureState& xi, const TorusCoords& c) {
    const std::size_t n = spec.n();
    if (xi.n() != n || c.phi.size() != n) throw std::invalid_argument("state_from_coords: dimension mismatch");
    if (!(c.tau0 >= 0.0 && c.tau0 < kTwoPi)) throw std::invalid_argument("state_from_coords: tau0 outside [0, 2pi)");
    Ray r(n);
    for (std::size_t j = 0; j < n; ++j)
        r[j] = xi.ray()[j] * std::polar(1.0, c.phi[j] - lift_phase(spec, j, xi.base(), c.k, c.tau0));
    return PureState(xi.base() + c.tau0, std::move(r));
}

std::vector<double> rewind_phases(const std::vector<double>& phi0, const std::vector<double>& omega, long k) {
    if (phi0.size() != omega.size()) throw std::invalid_argument("rewind_phases: size mismatch");
    std::vector<double> out(phi0.size());
    for (std::size_t j = 0; j < phi0.size(); ++j)
        out[j] = wrap_2pi(phi0[j] - kTwoPi * static_cast<double>(k) * omega[j]);
    return out;
}

double circular_distance(double a, double b) {
    const double d = wrap_2pi(a - b);
    return std::min(d, kTwoPi - d);
}

}  // namespace sc
