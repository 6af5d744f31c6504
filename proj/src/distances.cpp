#include "spectral_circle/distances.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool connected(RelationTag t) {
    return t == RelationTag::Accessible || t == RelationTag::ConnectedNotAccessible;
}

DistanceResult infinite() { return {kInf, Branch::Disconnected, std::nullopt, false, false}; }
}  // namespace

std::string to_string(Branch b) {
    switch (b) {
        case Branch::TrivialHolonomy: return "TrivialHolonomy";
        case Branch::TriangleMax: return "TriangleMax";
        case Branch::Equatorial: return "Equatorial";
        case Branch::Fiber2: return "Fiber2";
        case Branch::FiberN: return "FiberN";
        case Branch::Horizontal: return "Horizontal";
        case Branch::Disconnected: return "Disconnected";
    }
    return "?";
}

double holonomy_weight(long k, double omega, double phi) {
    const double den = std::sin(omega * kPi);
    if (den == 0.0 || !std::isfinite(den)) throw std::domain_error("holonomy_weight: integer omega");
    return std::abs(std::sin(static_cast<double>(k) * omega * kPi + 0.5 * phi)) / std::abs(den);
}

double h_xi(const TrianglePoint& p, const HParams& hp) {
    const double a = hp.tau0 - p.T, b = kTwoPi - hp.tau0 - p.T;
    double r1 = a * a - p.Delta * p.Delta;
    double r2 = b * b - p.Delta * p.Delta;
    const double eps = 1e-12;
    if (r1 < -eps || r2 < -eps || p.T < -eps) throw std::domain_error("h_xi: point outside the feasible triangle");
    r1 = std::max(r1, 0.0);
    r2 = std::max(r2, 0.0);
    double v = p.T + hp.z * p.Delta;
    if (hp.R != 0.0)
        v += hp.R * (holonomy_weight(hp.k + 1, hp.omega, hp.phi) * std::sqrt(r1) +
                     holonomy_weight(hp.k, hp.omega, hp.phi) * std::sqrt(r2));
    return v;
}

HParams h_params(const ConnectionSpec& spec, const PureState& xi, const TorusCoords& c, const Tolerances& tol) {
    if (spec.n() != 2) throw std::invalid_argument("h_params: needs n = 2");
    const auto h = holonomy_summary(spec, tol.holonomy);
    const BlochPoint b = to_bloch(xi);
    // rounding in |V0|^2 - |V1|^2 must not push an equatorial state off the equator
    const double z = std::abs(b.z) <= 1e-12 ? 0.0 : b.z;
    return HParams{z, b.R, c.tau0, c.k, h.omega[1], c.phi[1]};
}

DistanceResult spectral_distance_n2(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                                    const Tolerances& tol, const OptimizerOptions& opt) {
    if (spec.n() != 2 || xi.n() != 2 || zeta.n() != 2)
        throw std::invalid_argument("spectral_distance_n2: needs n = 2");
    const Relation rel = classify(spec, xi, zeta, tol);
    if (!connected(rel.tag)) return infinite();
    const auto c = torus_coords(spec, xi, zeta, 0, tol.modulus);
    const HParams hp = h_params(spec, xi, *c, tol);

    DistanceResult r;
    if (near_integer(hp.omega, tol.holonomy)) {
        // classify already required the phases to agree
        r.branch = Branch::TrivialHolonomy;
        r.value = std::min(c->tau0, kTwoPi - c->tau0);
        r.argmax = TrianglePoint{r.value, 0.0};
        return r;
    }
    r.ill_conditioned = std::abs(std::sin(hp.omega * kPi)) < 1e-6;
    if (c->tau0 == 0.0) {
        r.branch = Branch::Fiber2;
        r.value = kTwoPi * hp.R * holonomy_weight(hp.k, hp.omega, hp.phi);
        r.argmax = TrianglePoint{0.0, 0.0};
        return r;
    }
    const auto s = maximize_triangle([&](const TrianglePoint& p) { return h_xi(p, hp); }, hp.tau0, hp.z, opt);
    r.branch = (hp.z == 0.0) ? Branch::Equatorial : Branch::TriangleMax;
    r.value = s.best.value;
    r.argmax = s.best.at;
    r.used_fallback = s.used_fallback;
    return r;
}

CMatrix build_Sk(const ConnectionSpec& spec, const PureState& xi, const TorusCoords& c, const Tolerances& tol) {
    const std::size_t n = spec.n();
    if (xi.n() != n || c.phi.size() != n) throw std::invalid_argument("build_Sk: dimension mismatch");
    if (c.tau0 != 0.0) throw std::invalid_argument("build_Sk: state is not on the fiber (tau0 != 0)");
    const auto h = holonomy_summary(spec, tol.holonomy);
    CMatrix S(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || h.far_class[i] == h.far_class[j]) continue;
            const double dw = h.omega[j] - h.omega[i];
            const double Ri = 2.0 * std::norm(xi.ray()[i]), Rj = 2.0 * std::norm(xi.ray()[j]);
            S(i, j) = std::sqrt(Ri * Rj) *
                      std::sin(static_cast<double>(c.k) * kPi * dw + 0.5 * (c.phi[j] - c.phi[i])) /
                      std::sin(kPi * dw);
        }
    return S;
}

DistanceResult spectral_distance_fiber(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                                       const Tolerances& tol) {
    const Relation rel = classify(spec, xi, zeta, tol);
    if (!connected(rel.tag)) return infinite();
    const auto c = torus_coords(spec, xi, zeta, 0, tol.modulus);
    if (c->tau0 != 0.0) throw std::invalid_argument("spectral_distance_fiber: states lie over different base points");
    DistanceResult r;
    r.branch = Branch::FiberN;
    r.value = kPi * trace_abs(build_Sk(spec, xi, *c, tol));
    const auto h = holonomy_summary(spec, tol.holonomy);
    for (std::size_t i = 0; i < spec.n(); ++i)
        for (std::size_t j = i + 1; j < spec.n(); ++j)
            if (h.far_class[i] != h.far_class[j] && std::abs(std::sin(kPi * (h.omega[j] - h.omega[i]))) < 1e-6)
                r.ill_conditioned = true;
    return r;
}

DistanceResult horizontal_distance(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                                   const Tolerances& tol) {
    const Relation rel = classify(spec, xi, zeta, tol);
    if (rel.tag != RelationTag::Accessible) {
        DistanceResult r = infinite();
        r.branch = Branch::Horizontal;
        return r;
    }
    const double tau0 = wrap_2pi(zeta.base() - xi.base());
    return {std::abs(kTwoPi * static_cast<double>(*rel.witness_k) + tau0), Branch::Horizontal, std::nullopt, false,
            false};
}

DistanceResult spectral_distance(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                                 const Tolerances& tol, const OptimizerOptions& opt) {
    if (spec.n() == 2) return spectral_distance_n2(spec, xi, zeta, tol, opt);
    if (spec.n() == 1) {
        // a single direction: the bundle is the circle itself, arc-length metric
        const double tau0 = wrap_2pi(zeta.base() - xi.base());
        const double d = std::min(tau0, kTwoPi - tau0);
        return {d, Branch::TrivialHolonomy, TrianglePoint{d, 0.0}, false, false};
    }
    const Relation rel = classify(spec, xi, zeta, tol);
    if (!connected(rel.tag)) return infinite();
    if (wrap_2pi(zeta.base() - xi.base()) == 0.0) return spectral_distance_fiber(spec, xi, zeta, tol);
    throw std::domain_error("spectral_distance: no closed form off the fiber for n > 2");
}

}  // namespace sc
