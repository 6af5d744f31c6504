#pragma once

#include <cstdint>
#include <vector>

#include "spectral_circle/kernels.hpp"
#include "spectral_circle/topology.hpp"

namespace sc {

// Samples a(t_m), t_m = 2 pi m / N, of a Hermitian element of C(S^1) (x) M_n.
struct DiscretizedElement {
    std::vector<CMatrix> values;
    std::size_t N() const { return values.size(); }
    void validate() const;  // Hermitian within 1e-12, common size
};

// Central-difference i[D, a] at every grid point (grid origin = origin of spec).
std::vector<CMatrix> commutator_field(const ConnectionSpec& spec, const DiscretizedElement& a,
                                      Exec exec = Exec::Parallel);

double commutator_sup_norm(const ConnectionSpec& spec, const DiscretizedElement& a, Exec exec = Exec::Parallel);

// tr(s_zeta a(y)) - tr(s_xi a(x)) with both base points snapped to the grid;
// the larger of the two snapping offsets is written to *offset.
double evaluate_pair(const PureState& xi, const PureState& zeta, const DiscretizedElement& a,
                     double* offset = nullptr);

// Gauge-covariant piecewise-linear element used by the ascent, in the frame
// where xi sits at the origin: a_ij(t) = g_ij(t) exp(-i Theta_ij(t)), with g
// linear on each cell [m h, (m+1) h] and increments D_m = (g_{m+1} - g_m)/h.
// i[D, a] = E^* gdot E on each cell, so the exact commutator norm is max_m ||D_m||.
struct CovariantElement {
    std::vector<CMatrix> D;  // N Hermitian increments
};

struct OracleOptions {
    int N = 256;
    int restarts = 8;
    int iters = 2000;        // ascent iterations per restart, split across stages
    std::uint64_t seed = 1;
    int stages = 10;
    double temp_start = 1e-1;
    double temp_end = 1e-4;
    int p_max = 64;          // final Schatten exponent (power of two)
    Tolerances tol;
    void validate() const;
};

struct OracleReport {
    double best_value = 0.0;     // exact objective / exact commutator norm of the best element
    double comm_norm = 1.0;      // exact norm after rescaling
    double cd_comm_norm = 1.0;   // same element, central-difference norm on the grid
    double cd_value = 0.0;       // objective / cd_comm_norm
    double slack = 0.0;          // |cd_value - best_value|
    double snap_offset = 0.0;    // base points are evaluated exactly, so 0
    int iterations = 0;
    int restarts = 0;
    bool converged = false;
    bool diverges = false;       // states disconnected; best_value = +inf via divergence_check
    int best_restart = -1;
};

// Exact objective zeta_y(a) - xi_x(a) of a covariant element, and its exact norm.
struct CovariantEval {
    double objective = 0.0;
    double norm = 0.0;
};
CovariantEval evaluate_covariant(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                                 const CovariantElement& e, const Tolerances& tol = {});

// Samples of the covariant element at t_m (frame of xi) for central-difference checks.
DiscretizedElement sample_covariant(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                                    const CovariantElement& e, const Tolerances& tol = {});

// Maximizes the objective/commutator ratio. Extra seeds (e.g. a witness) are
// tried before the random restarts. Disconnected pairs report diverges = true.
OracleReport oracle_distance(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                             const OracleOptions& opt = {}, const std::vector<CovariantElement>& seeds = {});

// Disconnection witness: constant diagonal projector for a modulus mismatch,
// flat off-diagonal section on a far pair with different phases. Returns
// true when the witness has a nonzero objective and vanishing commutator.
bool divergence_check(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta, int scale_steps = 6,
                      const Tolerances& tol = {});

}  // namespace sc
