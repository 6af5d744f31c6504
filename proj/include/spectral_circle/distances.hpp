#pragma once

#include <optional>
#include <string>

#include "spectral_circle/optimizer.hpp"
#include "spectral_circle/topology.hpp"

namespace sc {

enum class Branch { TrivialHolonomy, TriangleMax, Equatorial, Fiber2, FiberN, Horizontal, Disconnected };

std::string to_string(Branch b);

struct DistanceResult {
    double value = 0.0;  // +inf when the states are not connected
    Branch branch = Branch::Disconnected;
    std::optional<TrianglePoint> argmax;
    bool ill_conditioned = false;  // |sin(omega pi)| tiny but omega not flagged integer
    bool used_fallback = false;    // interior grid beat the border search
};

// W_k = |sin(k omega pi + phi/2)| / |sin(omega pi)|.
// Throws std::domain_error when sin(omega pi) vanishes (use the trivial-holonomy branch).
double holonomy_weight(long k, double omega, double phi);

struct HParams {
    double z = 0.0, R = 0.0, tau0 = 0.0;
    long k = 0;
    double omega = 0.0, phi = 0.0;
};

// H(T, Delta) = T + z Delta + R W_{k+1} sqrt((tau0-T)^2 - Delta^2) + R W_k sqrt((2pi-tau0-T)^2 - Delta^2)
// Throws std::domain_error outside the feasible triangle (negative radicand).
double h_xi(const TrianglePoint& p, const HParams& hp);

HParams h_params(const ConnectionSpec& spec, const PureState& xi, const TorusCoords& c, const Tolerances& tol = {});

// n = 2, any pair of states.
DistanceResult spectral_distance_n2(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                                    const Tolerances& tol = {}, const OptimizerOptions& opt = {});

// Real symmetric S_k for a state on the fiber of xi (tau0 = 0).
CMatrix build_Sk(const ConnectionSpec& spec, const PureState& xi, const TorusCoords& c, const Tolerances& tol = {});

// pi * tr|S_k| for zeta on the fiber over the base point of xi; +inf if disconnected.
DistanceResult spectral_distance_fiber(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                                       const Tolerances& tol = {});

// length of the shortest horizontal curve (min |2k pi + tau0| over accessible windings)
DistanceResult horizontal_distance(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                                   const Tolerances& tol = {});

// Dispatch: n = 1 -> arc length on the circle; n = 2 -> spectral_distance_n2; n > 2 -> fiber formula (same base point) or
// +inf when disconnected. Off-fiber pairs with n > 2 throw std::domain_error.
DistanceResult spectral_distance(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                                 const Tolerances& tol = {}, const OptimizerOptions& opt = {});

}  // namespace sc
