#pragma once

#include <optional>
#include <string>

#include "spectral_circle/states.hpp"

namespace sc {

struct Tolerances {
    double holonomy = 1e-9;  // integer test on omega differences
    double phase = 1e-9;     // circular test on phases
    double modulus = 1e-9;   // |W_j| vs |V_j|
    int k_max = 64;          // winding search bound
    void validate() const;   // throws std::invalid_argument
};

enum class RelationTag { Accessible, ConnectedNotAccessible, SameTorusDisconnected, DifferentTorus };

struct Relation {
    RelationTag tag = RelationTag::DifferentTorus;
    std::optional<long> witness_k;  // set for Accessible: winding of the shortest horizontal path
};

std::string to_string(RelationTag t);

// Windings searched in the order 0, 1, -1, 2, -2, ... up to +-k_max.
long winding_at(int index);

// Same-class test: all nonzero components of one far class share the phase.
bool phases_agree_on_far_classes(const ConnectionSpec& spec, const PureState& xi, const TorusCoords& c,
                                 const Tolerances& tol);

Relation classify(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                  const Tolerances& tol = {});

}  // namespace sc
