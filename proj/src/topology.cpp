#include "spectral_circle/topology.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sc {

void Tolerances::validate() const {
    for (double t : {holonomy, phase, modulus})
        if (!(t > 0.0 && t < 1e-2)) throw std::invalid_argument("tolerances must lie in (0, 1e-2)");
    if (k_max < 0 || k_max > 1000000) throw std::invalid_argument("k_max must lie in [0, 1e6]");
}

std::string to_string(RelationTag t) {
    switch (t) {
        case RelationTag::Accessible: return "Accessible";
        case RelationTag::ConnectedNotAccessible: return "ConnectedNotAccessible";
        case RelationTag::SameTorusDisconnected: return "SameTorusDisconnected";
        case RelationTag::DifferentTorus: return "DifferentTorus";
    }
    return "?";
}

long winding_at(int index) {
    if (index == 0) return 0;
    const long m = (index + 1) / 2;
    return (index % 2 == 1) ? m : -m;
}

bool phases_agree_on_far_classes(const ConnectionSpec& spec, const PureState& xi, const TorusCoords& c,
                                 const Tolerances& tol) {
    const auto h = holonomy_summary(spec, tol.holonomy);
    for (const auto& cls : h.classes) {
        std::optional<double> first;
        for (std::size_t j : cls) {
            if (std::abs(xi.ray()[j]) <= tol.modulus) continue;
            if (!first) first = c.phi[j];
            else if (circular_distance(c.phi[j], *first) >= tol.phase) return false;
        }
    }
    return true;
}

Relation classify(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta, const Tolerances& tol) {
    tol.validate();
    Relation rel;
    const auto c0 = torus_coords(spec, xi, zeta, 0, tol.modulus);
    if (!c0) return rel;
    if (!phases_agree_on_far_classes(spec, xi, *c0, tol)) {
        rel.tag = RelationTag::SameTorusDisconnected;
        return rel;
    }
    const auto h = holonomy_summary(spec, tol.holonomy);
    double best = std::numeric_limits<double>::infinity();
    for (int idx = 0; idx <= 2 * tol.k_max; ++idx) {
        const long k = winding_at(idx);
        const auto phi = rewind_phases(c0->phi, h.omega, k);
        bool ok = true;
        for (std::size_t j = 0; j < spec.n() && ok; ++j)
            if (std::abs(xi.ray()[j]) > tol.modulus && circular_distance(phi[j], 0.0) >= tol.phase) ok = false;
        if (!ok) continue;
        const double len = std::abs(kTwoPi * static_cast<double>(k) + c0->tau0);
        if (len < best) {
            best = len;
            rel.witness_k = k;
        }
    }
    rel.tag = rel.witness_k ? RelationTag::Accessible : RelationTag::ConnectedNotAccessible;
    return rel;
}

}  // namespace sc
